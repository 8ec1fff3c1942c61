#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lcl/common.hpp"

namespace lcl {

enum class InputLabel : std::uint8_t { Active, Weight };

using Edge = std::pair<NodeId, NodeId>;

// Immutable bounded-degree tree in CSR form. Adjacency lists are sorted by
// node index; a "slot" is one directed edge (owner, port).
class Tree {
 public:
  Tree() = default;

  std::size_t size() const { return ids_.size(); }
  std::size_t edge_count() const { return adj_.size() / 2; }
  std::size_t max_degree() const { return max_degree_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::uint64_t id(NodeId v) const { return ids_[v]; }
  const std::vector<std::uint64_t>& ids() const { return ids_; }
  std::uint64_t max_id() const;

  bool has_inputs() const { return !inputs_.empty(); }
  InputLabel input(NodeId v) const { return inputs_.empty() ? InputLabel::Active : inputs_[v]; }
  const std::vector<InputLabel>& inputs() const { return inputs_; }

  std::size_t first_slot(NodeId v) const { return offsets_[v]; }
  std::size_t slot(NodeId v, std::size_t port) const { return offsets_[v] + port; }
  std::size_t slot_count() const { return adj_.size(); }
  NodeId slot_target(std::size_t s) const { return adj_[s]; }
  std::size_t reverse_slot(std::size_t s) const { return rev_[s]; }
  // Port of neighbour u in v's list; throws if not adjacent.
  std::size_t port_of(NodeId v, NodeId u) const;

  // Edges as (min, max) pairs in lexicographic order.
  std::vector<Edge> edges() const;

  Tree with_ids(std::vector<std::uint64_t> ids) const&;
  Tree with_ids(std::vector<std::uint64_t> ids) &&;
  Tree with_inputs(std::vector<InputLabel> inputs) &&;

 private:
  friend Tree build_tree(std::size_t, std::span<const Edge>, std::optional<std::vector<InputLabel>>,
                         std::optional<std::vector<std::uint64_t>>);
  static void check_ids(const std::vector<std::uint64_t>& ids, std::size_t n);

  std::vector<std::uint32_t> offsets_;
  std::vector<NodeId> adj_;
  std::vector<std::uint32_t> rev_;
  std::vector<std::uint64_t> ids_;
  std::vector<InputLabel> inputs_;
  std::size_t max_degree_ = 0;
};

Tree build_tree(std::size_t n, std::span<const Edge> edges,
                std::optional<std::vector<InputLabel>> inputs = std::nullopt,
                std::optional<std::vector<std::uint64_t>> ids = std::nullopt);

// n = 1 + largest index mentioned (or 1 for an empty edge list).
Tree build_tree(std::span<const Edge> edges);

Tree path_graph(std::size_t n);

// BFS-filled tree, fan-out delta-1 everywhere (root included); root is node 0.
Tree balanced_regular_tree(std::size_t delta, std::size_t size);

// Uniform attachment among nodes whose degree is still below max_degree.
Tree random_tree(std::size_t n, std::size_t max_degree, std::uint64_t seed);

// n distinct ids drawn uniformly from {1, ..., n*factor}, in random order.
std::vector<std::uint64_t> random_ids(std::size_t n, std::uint64_t factor, std::uint64_t seed);

struct LevelMap {
  int k = 0;
  std::vector<std::uint8_t> level;  // 0 for nodes outside the mask

  std::size_t count(int i) const;
};

// Peels nodes of degree <= 2 (degree 0 included) k times, inside the subgraph
// induced by mask. Remaining nodes get level k+1.
LevelMap compute_levels(const Tree& tree, int k, const NodeMask& mask = {});

NodeMask input_mask(const Tree& tree, InputLabel which);

}  // namespace lcl
