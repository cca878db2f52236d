#include "morphkit/error.hpp"
#include "morphkit/warp.hpp"

namespace morphkit {

std::string_view warp_method_name(WarpMethod m) noexcept {
  return m == WarpMethod::Triangle ? "triangle" : "field";
}

WarpMethod parse_warp_method(std::string_view name) {
  if (name == "triangle") return WarpMethod::Triangle;
  if (name == "field") return WarpMethod::Field;
  fail(Errc::InvalidArgument, "unknown warp method '" + std::string(name) + "' (expected triangle|field)");
}

namespace {

void check_consistent(const ImageBuffer& img, const LandmarkSet& lm) {
  validate_landmarks(lm);
  require(img.width() == lm.image_width && img.height() == lm.image_height, Errc::DimensionMismatch,
          "landmarks were annotated for a different image size");
}

std::vector<LineSegmentPair> field_pairs(const LandmarkSet& source, const LandmarkSet& target) {
  const auto src = build_line_pattern(source);
  const auto dst = build_line_pattern(target);
  return pair_segments(src, dst);
}

}  // namespace

ImageBuffer warp_to_target(const ImageBuffer& img, const LandmarkSet& source, const LandmarkSet& target,
                           WarpMethod method, const FieldMorphParams& params) {
  check_consistent(img, source);
  validate_landmarks(target);
  require(source.image_width == target.image_width && source.image_height == target.image_height,
          Errc::DimensionMismatch, "source and target landmarks refer to different image sizes");
  if (method == WarpMethod::Triangle) {
    const ExtendedLandmarkSet src = extend_landmarks(source);
    const ExtendedLandmarkSet dst = extend_landmarks(target);
    const TriangleMesh mesh = delaunay(dst.points);
    return warp_triangle_mesh(img, src.points, dst.points, mesh);
  }
  const auto pairs = field_pairs(source, target);
  return warp_field(img, pairs, params);
}

Point2 warp_backward_point(Point2 p, const LandmarkSet& source, const LandmarkSet& target,
                           WarpMethod method, const FieldMorphParams& params) {
  if (method == WarpMethod::Triangle) {
    const ExtendedLandmarkSet src = extend_landmarks(source);
    const ExtendedLandmarkSet dst = extend_landmarks(target);
    const TriangleMesh mesh = delaunay(dst.points);
    const TriangleWarpMap map(src.points, dst.points, mesh);
    const auto q = map.backward(p);
    require(q.has_value(), Errc::CoverageGap, "point lies outside the destination mesh");
    return *q;
  }
  const auto pairs = field_pairs(source, target);
  return field_morph_point(p, pairs, params);
}

AlignedPair morph_align(const ImageBuffer& img_a, const ImageBuffer& img_b, const LandmarkSet& lm_a,
                        const LandmarkSet& lm_b, WarpMethod method, const FieldMorphParams& params) {
  check_consistent(img_a, lm_a);
  check_consistent(img_b, lm_b);
  require(img_a.same_shape(img_b), Errc::DimensionMismatch, "morph_align: images differ in shape");
  AlignedPair out;
  out.target = average_landmarks(lm_a, lm_b);
  out.warped_a = warp_to_target(img_a, lm_a, out.target, method, params);
  out.warped_b = warp_to_target(img_b, lm_b, out.target, method, params);
  return out;
}

}  // namespace morphkit
