#pragma once

#include <vector>

namespace morphkit {

/// Dinic max-flow on a directed graph with real capacities. Residuals are stored directly so a
/// saturated edge reaches exactly zero.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  int add_node();
  /// Adds u->v with capacity `cap` and v->u with capacity `reverse_cap`; returns the edge id.
  int add_edge(int u, int v, double cap, double reverse_cap = 0.0);
  double solve(int source, int sink);

  /// After solve: true when the node is reachable from the source in the residual graph.
  bool on_source_side(int node) const { return source_side_[node] != 0; }
  /// Sum of original capacities of edges leaving the source side.
  double cut_capacity() const;
  int node_count() const { return static_cast<int>(adj_.size()); }

 private:
  struct Edge {
    int to;
    double residual;
    double capacity;
  };
  bool build_levels(int s, int t);
  double push(int u, int t, double limit);

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_, cursor_;
  std::vector<char> source_side_;
};

}  // namespace morphkit
