#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "morphkit/blend.hpp"
#include "morphkit/geometry.hpp"
#include "morphkit/image.hpp"
#include "morphkit/random.hpp"
#include "morphkit/warp.hpp"

namespace testing {

inline std::vector<morphkit::Point2> random_points(int n, double size, std::uint64_t seed) {
  morphkit::Rng rng(seed);
  std::vector<morphkit::Point2> p(n);
  for (morphkit::Point2& q : p) q = {rng.uniform(0, size), rng.uniform(0, size)};
  return p;
}

struct Circle {
  morphkit::Point2 center;
  double radius;
};

inline Circle circumcircle(morphkit::Point2 a, morphkit::Point2 b, morphkit::Point2 c) {
  const double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  const double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y, c2 = c.x * c.x + c.y * c.y;
  const morphkit::Point2 cc{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                            (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
  return {cc, std::hypot(cc.x - a.x, cc.y - a.y)};
}

/// Points of `pts` other than the triangle corners lying strictly inside a triangle's circumcircle.
inline int delaunay_violations(const morphkit::TriangleMesh& m, std::span<const morphkit::Point2> pts,
                               double rel_tol = 1e-9) {
  int bad = 0;
  for (const auto& t : m.triangles) {
    const Circle c = circumcircle(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const int k = static_cast<int>(i);
      if (k == t[0] || k == t[1] || k == t[2]) continue;
      bad += std::hypot(pts[i].x - c.center.x, pts[i].y - c.center.y) < c.radius * (1 - rel_tol);
    }
  }
  return bad;
}

/// Beier-Neely source position written out from the definitions: per pair, u along the target
/// segment, v along its normal (-dy, dx) / |d|, mapped onto the source segment, weighted by
/// 1 / (eps + dist)^2 where dist is the distance to the target segment.
inline morphkit::Point2 field_morph_reference(morphkit::Point2 x, std::span<const morphkit::LineSegmentPair> pairs,
                                              double eps) {
  double sx = 0.0, sy = 0.0, wsum = 0.0;
  for (const auto& pr : pairs) {
    const double px = pr.dst.start.x, py = pr.dst.start.y;
    const double qx = pr.dst.end.x - px, qy = pr.dst.end.y - py;
    const double len = std::sqrt(qx * qx + qy * qy);
    const double u = ((x.x - px) * qx + (x.y - py) * qy) / (len * len);
    const double v = ((x.x - px) * -qy + (x.y - py) * qx) / len;
    const double spx = pr.src.start.x, spy = pr.src.start.y;
    const double sqx = pr.src.end.x - spx, sqy = pr.src.end.y - spy;
    const double slen = std::sqrt(sqx * sqx + sqy * sqy);
    const double xs = spx + u * sqx + v * -sqy / slen;
    const double ys = spy + u * sqy + v * sqx / slen;
    double dist;
    if (u < 0)
      dist = std::hypot(x.x - px, x.y - py);
    else if (u > 1)
      dist = std::hypot(x.x - pr.dst.end.x, x.y - pr.dst.end.y);
    else
      dist = std::abs(v);
    const double w = 1.0 / ((eps + dist) * (eps + dist));
    sx += w * (xs - x.x);
    sy += w * (ys - x.y);
    wsum += w;
  }
  return {x.x + sx / wsum, x.y + sy / wsum};
}

/// Four-weight bilinear interpolation with coordinates clamped to the image.
inline double bilinear_reference(const morphkit::ImageBuffer& img, morphkit::Point2 p, int c) {
  const double x = std::clamp(p.x, 0.0, img.width() - 1.0), y = std::clamp(p.y, 0.0, img.height() - 1.0);
  const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width() - 1), y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0, fy = y - y0;
  return (1 - fx) * (1 - fy) * img.at(x0, y0, c) + fx * (1 - fy) * img.at(x1, y0, c) +
         (1 - fx) * fy * img.at(x0, y1, c) + fx * fy * img.at(x1, y1, c);
}

/// Cut cost from an explicit inner/outer labeling of every node: each grid edge whose ends
/// disagree contributes c(p) + c(q).
inline double labeling_cost(const morphkit::SeamCostGrid& g, const std::vector<int>& cut) {
  auto inner = [&](int i, int j) { return i <= cut[j]; };
  double total = 0.0;
  for (int j = 0; j < g.angular; ++j)
    for (int i = 0; i < g.radial; ++i) {
      if (i + 1 < g.radial && inner(i, j) != inner(i + 1, j)) total += g.at(i, j) + g.at(i + 1, j);
      const int k = (j + 1) % g.angular;
      if (g.angular > 1 && inner(i, j) != inner(i, k)) total += g.at(i, j) + g.at(i, k);
    }
  return total;
}

inline double brute_force_min(const morphkit::SeamCostGrid& g) {
  std::vector<int> cut(g.angular, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    best = std::min(best, labeling_cost(g, cut));
    int j = 0;
    while (j < g.angular && ++cut[j] > g.radial - 2) cut[j++] = 0;
    if (j == g.angular) break;
  }
  return best;
}

inline morphkit::SeamCostGrid random_grid(int nr, int na, std::uint64_t seed) {
  morphkit::Rng rng(seed);
  morphkit::SeamCostGrid g{nr, na, std::vector<double>(static_cast<std::size_t>(nr) * na)};
  for (double& c : g.node_cost) c = rng.uniform();
  return g;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= a[c][k] * x[k];
    x[c] = s / a[c][c];
  }
  return x;
}

struct PoissonReference {
  morphkit::ImageBuffer image;
  int unknowns = 0;
};

/// Dense 4-neighbor Poisson system over the annulus of one channel: guidance from the gradients of
/// `in`, Dirichlet values from `out` beyond the outer ellipse and from `in` inside the inner one.
/// Neighbors outside the image are dropped.
inline PoissonReference poisson_dense_reference(const morphkit::ImageBuffer& in, const morphkit::ImageBuffer& out,
                                                const morphkit::TransitionZone& z) {
  using Side = morphkit::TransitionZone::Side;
  const int w = in.width(), h = in.height();
  const auto side = z.mask();
  std::vector<int> id(side.size(), -1);
  int n = 0;
  for (std::size_t i = 0; i < side.size(); ++i)
    if (side[i] == Side::Annulus) id[i] = n++;
  PoissonReference ref{morphkit::ImageBuffer(w, h, in.channels()), n};
  for (int c = 0; c < in.channels(); ++c) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    for (int p = 0; p < w * h; ++p) {
      if (id[p] < 0) continue;
      const int x = p % w, y = p / w;
      for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const int q = ny * w + nx;
        a[id[p]][id[p]] += 1.0;
        b[id[p]] += in.at(x, y, c) - in.at(nx, ny, c);
        if (id[q] >= 0)
          a[id[p]][id[q]] -= 1.0;
        else
          b[id[p]] += side[q] == Side::Outer ? out.at(nx, ny, c) : in.at(nx, ny, c);
      }
    }
    const std::vector<double> sol = n > 0 ? dense_solve(a, b) : std::vector<double>{};
    for (int p = 0; p < w * h; ++p) {
      const int x = p % w, y = p / w;
      ref.image.at(x, y, c) = id[p] >= 0 ? sol[id[p]] : (side[p] == Side::Outer ? out.at(x, y, c) : in.at(x, y, c));
    }
  }
  return ref;
}

}  // namespace testing
