#include "lcl/tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace lcl {

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

std::uint64_t Tree::max_id() const {
  return ids_.empty() ? 0 : *std::max_element(ids_.begin(), ids_.end());
}

std::size_t Tree::port_of(NodeId v, NodeId u) const {
  auto nb = neighbors(v);
  auto it = std::lower_bound(nb.begin(), nb.end(), u);
  if (it == nb.end() || *it != u) throw Error("nodes " + std::to_string(v) + " and " + std::to_string(u) + " are not adjacent");
  return static_cast<std::size_t>(it - nb.begin());
}

std::vector<Edge> Tree::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId v = 0; v < size(); ++v)
    for (NodeId u : neighbors(v))
      if (v < u) out.emplace_back(v, u);
  return out;
}

void Tree::check_ids(const std::vector<std::uint64_t>& ids, std::size_t n) {
  if (ids.size() != n) throw Error("ids: expected " + std::to_string(n) + " entries");
  std::vector<std::uint64_t> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() == 0) throw Error("ids must be positive");
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw Error("duplicate ids");
}

Tree Tree::with_ids(std::vector<std::uint64_t> ids) const& {
  Tree copy = *this;
  return std::move(copy).with_ids(std::move(ids));
}

Tree Tree::with_ids(std::vector<std::uint64_t> ids) && {
  check_ids(ids, size());
  ids_ = std::move(ids);
  return std::move(*this);
}

Tree Tree::with_inputs(std::vector<InputLabel> inputs) && {
  if (!inputs.empty() && inputs.size() != size()) throw Error("inputs: wrong length");
  inputs_ = std::move(inputs);
  return std::move(*this);
}

Tree build_tree(std::size_t n, std::span<const Edge> edges, std::optional<std::vector<InputLabel>> inputs,
                std::optional<std::vector<std::uint64_t>> ids) {
  if (n == 0) throw Error("tree must have at least one node");
  if (n > (std::size_t{1} << 31)) throw Error("tree too large");
  UnionFind uf(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw Error("edge endpoint out of range");
    if (u == v || !uf.unite(u, v)) throw Error("cycle detected");
  }
  if (edges.size() != n - 1) throw Error("disconnected");

  Tree t;
  t.offsets_.assign(n + 1, 0);
  for (auto [u, v] : edges) {
    ++t.offsets_[u + 1];
    ++t.offsets_[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) t.offsets_[i + 1] += t.offsets_[i];
  t.adj_.resize(2 * edges.size());
  std::vector<std::uint32_t> fill(t.offsets_.begin(), t.offsets_.end() - 1);
  for (auto [u, v] : edges) {
    t.adj_[fill[u]++] = v;
    t.adj_[fill[v]++] = u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(t.adj_.begin() + t.offsets_[v], t.adj_.begin() + t.offsets_[v + 1]);
    t.max_degree_ = std::max<std::size_t>(t.max_degree_, t.offsets_[v + 1] - t.offsets_[v]);
  }
  t.rev_.resize(t.adj_.size());
  for (NodeId v = 0; v < n; ++v)
    for (std::size_t s = t.offsets_[v]; s < t.offsets_[v + 1]; ++s) {
      NodeId u = t.adj_[s];
      t.rev_[s] = static_cast<std::uint32_t>(t.offsets_[u] + t.port_of(u, v));
    }

  if (ids) {
    Tree::check_ids(*ids, n);
    t.ids_ = std::move(*ids);
  } else {
    t.ids_.resize(n);
    std::iota(t.ids_.begin(), t.ids_.end(), std::uint64_t{1});
  }
  if (inputs) {
    if (inputs->size() != n) throw Error("inputs: wrong length");
    t.inputs_ = std::move(*inputs);
  }
  return t;
}

Tree build_tree(std::span<const Edge> edges) {
  std::size_t n = 1;
  for (auto [u, v] : edges) n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
  return build_tree(n, edges);
}

Tree path_graph(std::size_t n) {
  if (n == 0) throw Error("path_graph: n must be positive");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return build_tree(n, edges);
}

Tree balanced_regular_tree(std::size_t delta, std::size_t size) {
  if (delta < 3) throw Error("balanced_regular_tree: delta must be at least 3");
  if (size == 0) throw Error("balanced_regular_tree: size must be positive");
  std::vector<Edge> edges;
  edges.reserve(size - 1);
  const std::size_t fan = delta - 1;
  for (std::size_t child = 1; child < size; ++child)
    edges.emplace_back(static_cast<NodeId>((child - 1) / fan), static_cast<NodeId>(child));
  return build_tree(size, edges);
}

Tree random_tree(std::size_t n, std::size_t max_degree, std::uint64_t seed) {
  if (n == 0) throw Error("random_tree: n must be positive");
  if (n > 2 && max_degree < 2) throw Error("random_tree: max_degree too small");
  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<std::size_t> deg(n, 0);
  std::vector<NodeId> open{0};
  for (NodeId v = 1; v < n; ++v) {
    std::size_t pick = uniform_below(rng, open.size());
    NodeId u = open[pick];
    edges.emplace_back(u, v);
    if (++deg[u] >= max_degree) {
      open[pick] = open.back();
      open.pop_back();
    }
    ++deg[v];
    if (deg[v] < max_degree) open.push_back(v);
  }
  return build_tree(n, edges);
}

std::vector<std::uint64_t> random_ids(std::size_t n, std::uint64_t factor, std::uint64_t seed) {
  if (factor == 0) throw Error("random_ids: factor must be positive");
  Rng rng(seed);
  std::vector<std::uint64_t> ids;
  ids.reserve(n);
  if (factor == 1) {
    for (std::uint64_t i = 1; i <= n; ++i) ids.push_back(i);
  } else {
    // Selection sampling keeps the chosen values sorted; shuffled below.
    std::uint64_t universe = static_cast<std::uint64_t>(n) * factor;
    std::uint64_t needed = n;
    for (std::uint64_t value = 1; value <= universe && needed > 0; ++value) {
      std::uint64_t left = universe - value + 1;
      if (uniform_below(rng, left) < needed) {
        ids.push_back(value);
        --needed;
      }
    }
  }
  shuffle(ids, rng);
  return ids;
}

std::size_t LevelMap::count(int i) const {
  return static_cast<std::size_t>(std::count(level.begin(), level.end(), static_cast<std::uint8_t>(i)));
}

LevelMap compute_levels(const Tree& tree, int k, const NodeMask& mask) {
  if (k < 1 || k > 250) throw Error("compute_levels: k out of range");
  const std::size_t n = tree.size();
  LevelMap out;
  out.k = k;
  out.level.assign(n, 0);
  std::vector<std::uint32_t> deg(n, 0);
  std::vector<NodeId> remaining;
  for (NodeId v = 0; v < n; ++v) {
    if (!in_mask(mask, v)) continue;
    remaining.push_back(v);
    for (NodeId u : tree.neighbors(v))
      if (in_mask(mask, u)) ++deg[v];
  }
  std::vector<NodeId> peeled;
  for (int i = 1; i <= k; ++i) {
    peeled.clear();
    std::size_t keep = 0;
    for (NodeId v : remaining) {
      if (deg[v] <= 2)
        peeled.push_back(v);
      else
        remaining[keep++] = v;
    }
    remaining.resize(keep);
    for (NodeId v : peeled) out.level[v] = static_cast<std::uint8_t>(i);
    for (NodeId v : peeled)
      for (NodeId u : tree.neighbors(v))
        if (in_mask(mask, u) && out.level[u] == 0) --deg[u];
  }
  for (NodeId v : remaining) out.level[v] = static_cast<std::uint8_t>(k + 1);
  return out;
}

NodeMask input_mask(const Tree& tree, InputLabel which) {
  NodeMask mask(tree.size(), 0);
  for (NodeId v = 0; v < tree.size(); ++v) mask[v] = tree.input(v) == which;
  return mask;
}

}  // namespace lcl
