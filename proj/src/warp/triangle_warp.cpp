#include <algorithm>
#include <cmath>
#include <vector>

#include "morphkit/error.hpp"
#include "morphkit/warp.hpp"

namespace morphkit {

AffineTransform affine_from_triangles(std::span<const Point2, 3> src, std::span<const Point2, 3> dst) {
  const Point2 u = src[1] - src[0];
  const Point2 v = src[2] - src[0];
  const double det = cross(u, v);
  const double scale = std::max({dot(u, u), dot(v, v), 1e-300});
  require(std::isfinite(det) && std::abs(det) > 1e-12 * scale, Errc::DegenerateSourceTriangle,
          "affine_from_triangles: source triangle is degenerate");

  AffineTransform t;
  const Point2 shift = dst[0] - src[0];
  if (dst[1] - src[1] == shift && dst[2] - src[2] == shift) {
    t.m = {1.0, 0.0, shift.x, 0.0, 1.0, shift.y};
    return t;
  }
  // linear part L = [d1-d0, d2-d0] * inverse([u v])
  const Point2 du = dst[1] - dst[0];
  const Point2 dv = dst[2] - dst[0];
  const double i00 = v.y / det, i01 = -v.x / det;
  const double i10 = -u.y / det, i11 = u.x / det;
  const double a = du.x * i00 + dv.x * i10;
  const double b = du.x * i01 + dv.x * i11;
  const double c = du.y * i00 + dv.y * i10;
  const double d = du.y * i01 + dv.y * i11;
  t.m = {a, b, dst[0].x - (a * src[0].x + b * src[0].y), c, d, dst[0].y - (c * src[0].x + d * src[0].y)};
  return t;
}

namespace {

void check_topology(std::span<const Point2> src_pts, std::span<const Point2> dst_pts,
                    const TriangleMesh& topology) {
  require(src_pts.size() == dst_pts.size(), Errc::CardinalityMismatch,
          "triangle warp: source and destination point counts differ");
  for (const auto& tri : topology.triangles)
    for (int i : tri)
      require(i >= 0 && static_cast<std::size_t>(i) < dst_pts.size(), Errc::InvalidArgument,
              "triangle warp: topology index out of range");
}

// Signed-distance test with a small tolerance so shared edges belong to both neighbors.
bool inside(const std::array<Point2, 3>& t, double sign, Point2 p) {
  for (int k = 0; k < 3; ++k) {
    const Point2 a = t[k], b = t[(k + 1) % 3];
    const double o = sign * orient2d(a, b, p);
    if (o < -1e-9 * norm(b - a)) return false;
  }
  return true;
}

}  // namespace

TriangleWarpMap::TriangleWarpMap(std::span<const Point2> src_pts, std::span<const Point2> dst_pts,
                                 const TriangleMesh& topology) {
  check_topology(src_pts, dst_pts, topology);
  dst_tris_.reserve(topology.triangles.size());
  to_src_.reserve(topology.triangles.size());
  for (const auto& tri : topology.triangles) {
    const std::array<Point2, 3> d{dst_pts[tri[0]], dst_pts[tri[1]], dst_pts[tri[2]]};
    const std::array<Point2, 3> s{src_pts[tri[0]], src_pts[tri[1]], src_pts[tri[2]]};
    to_src_.push_back(affine_from_triangles(std::span<const Point2, 3>(d), std::span<const Point2, 3>(s)));
    dst_tris_.push_back(d);
  }
}

std::optional<int> TriangleWarpMap::locate(Point2 p) const {
  for (std::size_t t = 0; t < dst_tris_.size(); ++t) {
    const auto& tri = dst_tris_[t];
    const double sign = orient2d(tri[0], tri[1], tri[2]) > 0.0 ? 1.0 : -1.0;
    if (inside(tri, sign, p)) return static_cast<int>(t);
  }
  return std::nullopt;
}

std::optional<Point2> TriangleWarpMap::backward(Point2 p) const {
  const auto t = locate(p);
  if (!t) return std::nullopt;
  return to_src_[*t].apply(p);
}

ImageBuffer warp_triangle_mesh(const ImageBuffer& img, std::span<const Point2> src_pts,
                               std::span<const Point2> dst_pts, const TriangleMesh& topology) {
  const TriangleWarpMap map(src_pts, dst_pts, topology);
  const int w = img.width(), h = img.height(), ch = img.channels();
  ImageBuffer out(w, h, ch);
  std::vector<char> done(static_cast<std::size_t>(w) * h, 0);

  // Rasterize triangles in topology order; the first triangle to claim a pixel wins.
  for (std::size_t t = 0; t < map.triangle_count(); ++t) {
    const auto& tri = map.dst_triangle(static_cast<int>(t));
    const double sign = orient2d(tri[0], tri[1], tri[2]) > 0.0 ? 1.0 : -1.0;
    const double x0 = std::min({tri[0].x, tri[1].x, tri[2].x});
    const double x1 = std::max({tri[0].x, tri[1].x, tri[2].x});
    const double y0 = std::min({tri[0].y, tri[1].y, tri[2].y});
    const double y1 = std::max({tri[0].y, tri[1].y, tri[2].y});
    const int xa = std::max(0, static_cast<int>(std::floor(x0 - 1e-6)));
    const int xb = std::min(w - 1, static_cast<int>(std::ceil(x1 + 1e-6)));
    const int ya = std::max(0, static_cast<int>(std::floor(y0 - 1e-6)));
    const int yb = std::min(h - 1, static_cast<int>(std::ceil(y1 + 1e-6)));
    const AffineTransform& a = map.transform(static_cast<int>(t));
    for (int y = ya; y <= yb; ++y) {
      for (int x = xa; x <= xb; ++x) {
        char& flag = done[static_cast<std::size_t>(y) * w + x];
        const Point2 p{static_cast<double>(x), static_cast<double>(y)};
        if (flag || !inside(tri, sign, p)) continue;
        flag = 1;
        sample_bilinear(img, a.apply(p), out.data().subspan((static_cast<std::size_t>(y) * w + x) * ch, ch));
      }
    }
  }
  for (std::size_t i = 0; i < done.size(); ++i)
    if (!done[i])
      fail(Errc::CoverageGap, "triangle warp: pixel (" + std::to_string(i % w) + ", " +
                                  std::to_string(i / w) + ") lies in no destination triangle");
  return out;
}

}  // namespace morphkit
