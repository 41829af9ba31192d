#pragma once

#include <vector>

namespace armwind {

/// Dinic max-flow on small integer-capacity graphs.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  int add_node();
  void add_edge(int from, int to, int capacity);
  /// Flow value, stopping early once `limit` is reached.
  int run(int source, int sink, int limit = 1 << 30);

 private:
  struct Edge {
    int to;
    int cap;
  };
  bool levels(int s, int t);
  int push(int v, int t, int f);

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_, it_;
};

}  // namespace armwind
