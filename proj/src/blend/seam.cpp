#include <algorithm>
#include <cmath>
#include <limits>

#include "morphkit/blend.hpp"
#include "morphkit/error.hpp"
#include "morphkit/maxflow.hpp"

namespace morphkit {

SeamCostGrid seam_costs(const PolarPatch& inner, const PolarPatch& outer) {
  require(inner.radial_samples == outer.radial_samples && inner.angular_samples == outer.angular_samples &&
              inner.channels == outer.channels,
          Errc::DimensionMismatch, "seam costs: polar patches differ in shape");
  const int nr = inner.radial_samples, na = inner.angular_samples, ch = inner.channels;
  require(nr >= 2 && na >= 1, Errc::EmptyAnnulus, "seam costs: polar grid too small");
  auto diff = [&](int i, int j, int c) { return inner.at(i, j, c) - outer.at(i, j, c); };
  SeamCostGrid g;
  g.radial = nr;
  g.angular = na;
  g.node_cost.resize(static_cast<std::size_t>(nr) * na);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < na; ++j) {
      double sum = 0.0;
      for (int c = 0; c < ch; ++c) {
        const double dr = i + 1 < nr ? diff(i + 1, j, c) - diff(i, j, c) : diff(i, j, c) - diff(i - 1, j, c);
        const double da = diff(i, (j + 1) % na, c) - diff(i, j, c);
        sum += dr * dr + da * da;
      }
      g.node_cost[static_cast<std::size_t>(i) * na + j] = std::sqrt(sum);
    }
  return g;
}

double seam_cost(const SeamCostGrid& costs, const std::vector<int>& cut) {
  const int na = costs.angular;
  require(static_cast<int>(cut.size()) == na, Errc::DimensionMismatch, "seam cost: one cut index per column");
  double total = 0.0;
  for (int j = 0; j < na; ++j) {
    const int t = cut[j];
    require(t >= 0 && t + 1 < costs.radial, Errc::InvalidArgument, "seam cost: cut index out of range");
    total += costs.at(t, j) + costs.at(t + 1, j);
    const int k = (j + 1) % na;
    const int lo = std::min(t, cut[k]), hi = std::max(t, cut[k]);
    for (int i = lo + 1; i <= hi; ++i) total += costs.at(i, j) + costs.at(i, k);
  }
  return total;
}

SeamCut min_cut_seam(const SeamCostGrid& costs, int max_step) {
  const int nr = costs.radial, na = costs.angular;
  require(nr >= 2 && na >= 1, Errc::EmptyAnnulus, "seam: polar grid too small");
  for (double c : costs.node_cost)
    require(std::isfinite(c) && c >= 0.0, Errc::FlowOverflow, "seam: node costs must be finite and non-negative");

  const double inf = std::numeric_limits<double>::infinity();
  const int source = nr * na, sink = source + 1;
  MaxFlow g(nr * na + 2);
  auto node = [na](int i, int j) { return i * na + j; };
  for (int j = 0; j < na; ++j) {
    g.add_edge(source, node(0, j), inf);
    g.add_edge(node(nr - 1, j), sink, inf);
    // forward radial edges carry the cost; infinite reverse edges allow one cut per column
    for (int i = 0; i + 1 < nr; ++i) g.add_edge(node(i, j), node(i + 1, j), costs.at(i, j) + costs.at(i + 1, j), inf);
    if (na > 1) {
      const int k = (j + 1) % na;
      for (int i = 0; i < nr; ++i) {
        const double c = costs.at(i, j) + costs.at(i, k);
        g.add_edge(node(i, j), node(i, k), c, c);
      }
      if (max_step >= 0)
        for (int i = max_step + 1; i < nr; ++i) {
          g.add_edge(node(i, j), node(i - max_step, k), inf);
          g.add_edge(node(i, k), node(i - max_step, j), inf);
        }
    }
  }
  SeamCut seam;
  seam.radial_samples = nr;
  seam.angular_samples = na;
  seam.flow = g.solve(source, sink);
  seam.cut.resize(na);
  for (int j = 0; j < na; ++j) {
    int t = 0;
    while (t + 1 < nr && g.on_source_side(node(t + 1, j))) ++t;
    for (int i = t + 1; i < nr; ++i)
      require(!g.on_source_side(node(i, j)), Errc::FlowOverflow, "seam: cut is not monotone along a column");
    seam.cut[j] = std::min(t, nr - 2);
  }
  seam.cost = seam_cost(costs, seam.cut);
  require(std::abs(seam.cost - seam.flow) <= 1e-9 * std::max(1.0, seam.flow), Errc::FlowOverflow,
          "seam: cut cost differs from the max-flow value");
  return seam;
}

PolarGeometry seam_geometry(const TransitionZone& zone, PolarDims dims) {
  PolarGeometry g;
  g.center = zone.inner.center;
  g.scale_x = zone.inner.semi_axis_x;
  g.scale_y = zone.inner.semi_axis_y;
  g.r_min = 1.0;
  g.r_max = zone.outer_ratio();
  const double extent = std::max(g.scale_x, g.scale_y);
  g.radial_samples = dims.radial > 0 ? dims.radial
                                     : std::max(3, static_cast<int>(std::ceil((g.r_max - g.r_min) * extent)) + 1);
  g.angular_samples =
      dims.angular > 0 ? dims.angular : std::max(8, static_cast<int>(std::ceil(2.0 * 3.141592653589793 * g.r_max * extent)));
  return g;
}

SeamCut seam_cut_high(const SignedImage& high_inner, const SignedImage& high_outer, const TransitionZone& zone,
                      PolarDims dims) {
  require_same_shape(high_inner, high_outer, "seam_cut_high");
  const PolarGeometry geo = seam_geometry(zone, dims);
  const PolarPatch in = to_polar(high_inner, geo);
  const PolarPatch out = to_polar(high_outer, geo);
  return min_cut_seam(seam_costs(in, out));
}

std::vector<char> seam_inner_mask(const TransitionZone& zone, const SeamCut& seam) {
  PolarPatch frame;
  frame.center = zone.inner.center;
  frame.scale_x = zone.inner.semi_axis_x;
  frame.scale_y = zone.inner.semi_axis_y;
  frame.r_min = 1.0;
  frame.r_max = zone.outer_ratio();
  frame.radial_samples = seam.radial_samples;
  frame.angular_samples = seam.angular_samples;
  const auto sides = zone.mask();
  std::vector<char> inner(sides.size(), 0);
  const int na = seam.angular_samples;
  for (int y = 0; y < zone.height; ++y)
    for (int x = 0; x < zone.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * zone.width + x;
      if (sides[i] == TransitionZone::Side::Inner) {
        inner[i] = 1;
      } else if (sides[i] == TransitionZone::Side::Annulus) {
        const Point2 g = frame.grid_coords({static_cast<double>(x), static_cast<double>(y)});
        const double af = std::floor(g.y);
        const int j0 = static_cast<int>(af) % na, j1 = (j0 + 1) % na;
        const double w = g.y - af;
        const double t = (1.0 - w) * seam.cut[j0] + w * seam.cut[j1];
        inner[i] = g.x <= t + 0.5 ? 1 : 0;
      }
    }
  return inner;
}

}  // namespace morphkit
