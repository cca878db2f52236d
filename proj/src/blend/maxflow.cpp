#include "morphkit/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "morphkit/error.hpp"

namespace morphkit {

MaxFlow::MaxFlow(int nodes) : adj_(nodes) {}

int MaxFlow::add_node() {
  adj_.emplace_back();
  return static_cast<int>(adj_.size()) - 1;
}

int MaxFlow::add_edge(int u, int v, double cap, double reverse_cap) {
  require(!std::isnan(cap) && !std::isnan(reverse_cap) && cap >= 0.0 && reverse_cap >= 0.0,
          Errc::FlowOverflow, "max-flow: capacities must be non-negative numbers");
  const int id = static_cast<int>(edges_.size());
  edges_.push_back({v, cap, cap});
  edges_.push_back({u, reverse_cap, reverse_cap});
  adj_[u].push_back(id);
  adj_[v].push_back(id + 1);
  return id;
}

bool MaxFlow::build_levels(int s, int t) {
  level_.assign(adj_.size(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int e : adj_[u]) {
      const Edge& ed = edges_[e];
      if (ed.residual > 0.0 && level_[ed.to] < 0) {
        level_[ed.to] = level_[u] + 1;
        q.push(ed.to);
      }
    }
  }
  return level_[t] >= 0;
}

double MaxFlow::push(int u, int t, double limit) {
  if (u == t) return limit;
  for (int& i = cursor_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
    const int e = adj_[u][i];
    Edge& ed = edges_[e];
    if (ed.residual <= 0.0 || level_[ed.to] != level_[u] + 1) continue;
    const double got = push(ed.to, t, std::min(limit, ed.residual));
    if (got > 0.0) {
      ed.residual = got == ed.residual ? 0.0 : ed.residual - got;
      edges_[e ^ 1].residual += got;
      return got;
    }
  }
  return 0.0;
}

double MaxFlow::solve(int source, int sink) {
  const double inf = std::numeric_limits<double>::infinity();
  double flow = 0.0;
  while (build_levels(source, sink)) {
    cursor_.assign(adj_.size(), 0);
    for (double f = push(source, sink, inf); f > 0.0; f = push(source, sink, inf)) {
      require(std::isfinite(f), Errc::FlowOverflow, "max-flow: unbounded flow (infinite s-t path)");
      flow += f;
    }
  }
  require(std::isfinite(flow), Errc::FlowOverflow, "max-flow: flow value overflowed");
  source_side_.assign(adj_.size(), 0);
  std::queue<int> q;
  source_side_[source] = 1;
  q.push(source);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int e : adj_[u]) {
      const Edge& ed = edges_[e];
      if (ed.residual > 0.0 && !source_side_[ed.to]) {
        source_side_[ed.to] = 1;
        q.push(ed.to);
      }
    }
  }
  return flow;
}

double MaxFlow::cut_capacity() const {
  double sum = 0.0;
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    if (!source_side_[u]) continue;
    for (int e : adj_[u])
      if (!source_side_[edges_[e].to]) sum += edges_[e].capacity;
  }
  return sum;
}

}  // namespace morphkit
