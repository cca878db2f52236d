#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "morphkit/image.hpp"
#include "morphkit/landmarks.hpp"

namespace morphkit {

struct TriangleMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise in a y-up frame
};

/// Delaunay triangulation of the convex hull. Exact duplicate points are triangulated once
/// (the lowest index is used); ties between co-circular points resolve deterministically.
TriangleMesh delaunay(std::span<const Point2> points);

/// x' = m[0] x + m[1] y + m[2],  y' = m[3] x + m[4] y + m[5]
struct AffineTransform {
  std::array<double, 6> m{1.0, 0.0, 0.0, 0.0, 1.0, 0.0};

  Point2 apply(Point2 p) const { return {m[0] * p.x + m[1] * p.y + m[2], m[3] * p.x + m[4] * p.y + m[5]}; }
};

/// Affine map sending src[i] to dst[i]. Pure translations are produced exactly.
AffineTransform affine_from_triangles(std::span<const Point2, 3> src, std::span<const Point2, 3> dst);

/// Backward map of a piecewise-affine warp: output position -> source position.
class TriangleWarpMap {
 public:
  TriangleWarpMap(std::span<const Point2> src_pts, std::span<const Point2> dst_pts,
                  const TriangleMesh& topology);

  /// Index of the first triangle (topology order) containing p in the destination mesh.
  std::optional<int> locate(Point2 p) const;
  std::optional<Point2> backward(Point2 p) const;
  const AffineTransform& transform(int triangle) const { return to_src_[triangle]; }
  std::size_t triangle_count() const { return dst_tris_.size(); }
  const std::array<Point2, 3>& dst_triangle(int t) const { return dst_tris_[t]; }

 private:
  std::vector<std::array<Point2, 3>> dst_tris_;
  std::vector<AffineTransform> to_src_;
};

/// Backward-mapped piecewise-affine warp; throws CoverageGap when an output pixel lies in no
/// destination triangle.
ImageBuffer warp_triangle_mesh(const ImageBuffer& img, std::span<const Point2> src_pts,
                               std::span<const Point2> dst_pts, const TriangleMesh& topology);

/// Corresponding segments: `src` lives in the source image, `dst` in the warped (target) image.
struct LineSegmentPair {
  LineSegment src;
  LineSegment dst;
};

LineSegmentPair make_segment_pair(LineSegment src, LineSegment dst);
std::vector<LineSegmentPair> pair_segments(std::span<const LineSegment> src,
                                           std::span<const LineSegment> dst);
/// Unit normal (-dy, dx) / length.
Point2 segment_normal(const LineSegment& s);

struct FieldMorphParams {
  double epsilon = 0.5;  // pixels, stabilizes the inverse-distance weight
  static constexpr double weight_exponent = 2.0;
};

/// Source-image position for target pixel p under Beier-Neely field morphing.
Point2 field_morph_point(Point2 p, std::span<const LineSegmentPair> pairs,
                         const FieldMorphParams& params = {});
ImageBuffer warp_field(const ImageBuffer& img, std::span<const LineSegmentPair> pairs,
                       const FieldMorphParams& params = {});

enum class WarpMethod { Triangle, Field };
std::string_view warp_method_name(WarpMethod m) noexcept;
WarpMethod parse_warp_method(std::string_view name);

struct AlignedPair {
  ImageBuffer warped_a;
  ImageBuffer warped_b;
  LandmarkSet target;
};

/// Warps one image from its own landmark geometry to `target` with the chosen backend.
ImageBuffer warp_to_target(const ImageBuffer& img, const LandmarkSet& source,
                           const LandmarkSet& target, WarpMethod method,
                           const FieldMorphParams& params = {});

/// Backward point map used by warp_to_target (target position -> source position).
Point2 warp_backward_point(Point2 p, const LandmarkSet& source, const LandmarkSet& target,
                           WarpMethod method, const FieldMorphParams& params = {});

AlignedPair morph_align(const ImageBuffer& img_a, const ImageBuffer& img_b, const LandmarkSet& lm_a,
                        const LandmarkSet& lm_b, WarpMethod method,
                        const FieldMorphParams& params = {});

}  // namespace morphkit
