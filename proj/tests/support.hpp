// Helpers shared by the unit tests: small fuzz trees and independent oracles.
#pragma once

#include <algorithm>
#include <queue>
#include <vector>

#include "lcl/common.hpp"
#include "lcl/tree.hpp"

namespace lcl::test {

// Random tree on n nodes (uniform attachment) with ids drawn from 1..3n.
inline Tree fuzz_tree(std::size_t n, std::size_t max_degree, std::uint64_t seed) {
  return random_tree(n, max_degree, seed).with_ids(random_ids(n, 3, seed ^ 0x9e3779b97f4a7c15ull));
}

inline std::vector<std::size_t> bfs_depth(const Tree& t, NodeId root) {
  std::vector<std::size_t> depth(t.size(), SIZE_MAX);
  std::queue<NodeId> q;
  depth[root] = 0;
  q.push(root);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId w : t.neighbors(u))
      if (depth[w] == SIZE_MAX) {
        depth[w] = depth[u] + 1;
        q.push(w);
      }
  }
  return depth;
}

// Level by definition: repeatedly strip every node of degree <= 2 in the
// remaining graph, counting passes. Quadratic, for small trees only.
inline std::vector<int> levels_by_definition(const Tree& t, int k) {
  const std::size_t n = t.size();
  std::vector<int> level(n, 0);
  for (int i = 1; i <= k; ++i) {
    std::vector<NodeId> strip;
    for (NodeId v = 0; v < n; ++v) {
      if (level[v]) continue;
      int deg = 0;
      for (NodeId w : t.neighbors(v)) deg += level[w] == 0;
      if (deg <= 2) strip.push_back(v);
    }
    for (NodeId v : strip) level[v] = i;
  }
  for (auto& l : level)
    if (!l) l = k + 1;
  return level;
}

}  // namespace lcl::test
