#include "armwind/maxflow.hpp"

#include <algorithm>
#include <queue>

namespace armwind {

MaxFlow::MaxFlow(int nodes) : adj_(nodes) {}

int MaxFlow::add_node() {
  adj_.emplace_back();
  return int(adj_.size()) - 1;
}

void MaxFlow::add_edge(int from, int to, int capacity) {
  adj_[from].push_back(int(edges_.size()));
  edges_.push_back({to, capacity});
  adj_[to].push_back(int(edges_.size()));
  edges_.push_back({from, 0});
}

bool MaxFlow::levels(int s, int t) {
  level_.assign(adj_.size(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int id : adj_[v]) {
      const Edge& e = edges_[id];
      if (e.cap > 0 && level_[e.to] < 0) {
        level_[e.to] = level_[v] + 1;
        q.push(e.to);
      }
    }
  }
  return level_[t] >= 0;
}

int MaxFlow::push(int v, int t, int f) {
  if (v == t) return f;
  for (int& i = it_[v]; i < int(adj_[v].size()); ++i) {
    const int id = adj_[v][i];
    Edge& e = edges_[id];
    if (e.cap <= 0 || level_[e.to] != level_[v] + 1) continue;
    const int got = push(e.to, t, std::min(f, e.cap));
    if (got > 0) {
      e.cap -= got;
      edges_[id ^ 1].cap += got;
      return got;
    }
  }
  return 0;
}

int MaxFlow::run(int source, int sink, int limit) {
  int flow = 0;
  while (flow < limit && levels(source, sink)) {
    it_.assign(adj_.size(), 0);
    while (flow < limit) {
      const int f = push(source, sink, limit - flow);
      if (f == 0) break;
      flow += f;
    }
  }
  return flow;
}

}  // namespace armwind
