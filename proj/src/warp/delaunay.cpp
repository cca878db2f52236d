#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "morphkit/error.hpp"
#include "morphkit/warp.hpp"

namespace morphkit {

namespace {

// > 0 when d lies strictly inside the circumcircle of the counter-clockwise triangle abc
double in_circle(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

class MeshBuilder {
 public:
  explicit MeshBuilder(std::span<const Point2> pts) : pts_(pts) {}

  void add(int a, int b, int c) {
    const int id = static_cast<int>(tris_.size());
    tris_.push_back({a, b, c});
    link(a, b, id);
    link(b, c, id);
    link(c, a, id);
  }

  // Lawson flips until every interior edge is locally Delaunay.
  void legalize() {
    std::vector<std::uint64_t> stack;
    stack.reserve(edges_.size());
    for (const auto& [key, owners] : edges_)
      if (owners[1] >= 0) stack.push_back(key);
    std::sort(stack.begin(), stack.end());  // unordered_map order is not portable
    while (!stack.empty()) {
      const std::uint64_t key = stack.back();
      stack.pop_back();
      auto it = edges_.find(key);
      if (it == edges_.end() || it->second[1] < 0) continue;
      const int t1 = it->second[0], t2 = it->second[1];
      const int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
      // orient so that t1 = (p, q, c) and t2 = (q, p, d)
      auto [p, q, c] = rotate_to_edge(t1, a, b);
      auto [q2, p2, d] = rotate_to_edge(t2, q, p);
      (void)q2;
      (void)p2;
      if (in_circle(pts_[p], pts_[q], pts_[c], pts_[d]) <= 0.0) continue;
      unlink(p, q);
      relink(p, d, t2, t1);
      relink(q, c, t1, t2);
      tris_[t1] = {p, d, c};
      tris_[t2] = {d, q, c};
      edges_[edge_key(c, d)] = {t1, t2};
      for (auto e : {edge_key(p, d), edge_key(d, q), edge_key(q, c), edge_key(c, p)}) stack.push_back(e);
    }
  }

  std::vector<std::array<int, 3>> take() { return std::move(tris_); }

 private:
  // Returns the triangle's vertices rotated so the first two are the edge (u, v) in the
  // triangle's winding order.
  std::array<int, 3> rotate_to_edge(int t, int u, int v) const {
    const auto& tri = tris_[t];
    for (int k = 0; k < 3; ++k) {
      const int x = tri[k], y = tri[(k + 1) % 3], z = tri[(k + 2) % 3];
      if (x == u && y == v) return {x, y, z};
      if (x == v && y == u) return {x, y, z};
    }
    fail(Errc::InvalidArgument, "delaunay: inconsistent adjacency");
  }

  void link(int a, int b, int t) {
    auto [it, inserted] = edges_.try_emplace(edge_key(a, b), std::array<int, 2>{t, -1});
    if (!inserted) it->second[1] = t;
  }
  void unlink(int a, int b) { edges_.erase(edge_key(a, b)); }
  void relink(int a, int b, int from, int to) {
    auto& owners = edges_.at(edge_key(a, b));
    for (int& o : owners)
      if (o == from) {
        o = to;
        return;
      }
  }

  std::span<const Point2> pts_;
  std::vector<std::array<int, 3>> tris_;
  std::unordered_map<std::uint64_t, std::array<int, 2>> edges_;
};

}  // namespace

TriangleMesh delaunay(std::span<const Point2> points) {
  for (const Point2& p : points)
    require(std::isfinite(p.x) && std::isfinite(p.y), Errc::InvalidArgument,
            "delaunay: non-finite point");

  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return points[i].x < points[j].x || (points[i].x == points[j].x && points[i].y < points[j].y);
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](int i, int j) { return points[i] == points[j]; }),
              order.end());
  require(order.size() >= 3, Errc::TooFewPoints, "delaunay needs at least 3 distinct points");

  // First point off the line through the two lexicographically smallest points.
  std::size_t k = 2;
  while (k < order.size() && orient2d(points[order[0]], points[order[1]], points[order[k]]) == 0.0) ++k;
  require(k < order.size(), Errc::AllCollinear, "delaunay: all points are collinear");

  MeshBuilder mesh(points);
  std::vector<int> hull;  // counter-clockwise
  const int apex = order[k];
  const bool left = orient2d(points[order[0]], points[order[k - 1]], points[apex]) > 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (left)
      mesh.add(order[i], order[i + 1], apex);
    else
      mesh.add(order[i + 1], order[i], apex);
  }
  if (left) {
    for (std::size_t i = 0; i < k; ++i) hull.push_back(order[i]);
    hull.push_back(apex);
  } else {
    hull.push_back(order[0]);
    hull.push_back(apex);
    for (std::size_t i = k - 1; i >= 1; --i) hull.push_back(order[i]);
  }

  // Sweep: every later point lies outside the current hull; connect it to the visible chain.
  for (std::size_t s = k + 1; s < order.size(); ++s) {
    const int q = order[s];
    const std::size_t n = hull.size();
    std::vector<char> visible(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      visible[i] = orient2d(points[hull[i]], points[hull[(i + 1) % n]], points[q]) < 0.0;
      any = any || visible[i];
    }
    require(any, Errc::AllCollinear, "delaunay: sweep found no visible hull edge");
    // first visible edge whose predecessor is not visible
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (visible[i] && !visible[(i + n - 1) % n]) {
        start = i;
        break;
      }
    std::size_t count = 0;
    while (count < n && visible[(start + count) % n]) {
      const std::size_t i = (start + count) % n;
      mesh.add(hull[i], q, hull[(i + 1) % n]);
      ++count;
    }
    // chain hull[start] .. hull[start + count]: interior vertices go, q takes their place
    std::vector<int> next;
    next.reserve(n - count + 2);
    for (std::size_t i = 0; i <= n - count; ++i) next.push_back(hull[(start + count + i) % n]);
    next.push_back(q);
    hull = std::move(next);
  }

  mesh.legalize();
  TriangleMesh out;
  out.vertices.assign(points.begin(), points.end());
  out.triangles = mesh.take();
  for (const auto& t : out.triangles) {
    const double area = 0.5 * orient2d(points[t[0]], points[t[1]], points[t[2]]);
    require(area > 1e-9, Errc::AllCollinear, "delaunay produced a degenerate triangle");
  }
  return out;
}

}  // namespace morphkit
