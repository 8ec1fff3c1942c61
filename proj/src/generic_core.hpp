#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "lcl/algorithms.hpp"

namespace lcl::detail {

enum MsgKind : std::uint8_t {
  kHello = 1,     // id, level, current label; sent by active nodes in round 0
  kDecided = 2,   // final label; value/flags carry a final path colour during 3-colouring
  kToken = 3,     // path measurement: id of the endpoint, value = hops travelled
  kColour = 4,    // intermediate Cole-Vishkin colour
  kCopyLabel = 5, // weighted problem: secondary output flooded through Copy nodes
  kSecondary = 6, // weight-augmented problem: secondary output of a weight node
};

constexpr std::uint8_t kUndecided = 0xFF;
constexpr std::uint8_t kFinalColour = 1;

inline std::uint8_t code(Color c) { return static_cast<std::uint8_t>(c); }

// Message-passing implementation of the generic k-phase algorithm for the
// active nodes of a tree. Composite programs call step() for active nodes and
// absorb() for any other node that wants to track its active neighbours.
class GenericCore {
 public:
  GenericCore(const Tree& tree, const LevelMap& levels, const NodeMask& active, Variant variant,
              std::vector<std::uint64_t> gammas, std::uint64_t id_bound);

  void step(Context& ctx);
  // Records Hello/Decided messages from active neighbours.
  void absorb(Context& ctx);

  bool decided(NodeId v) const { return state_[v].label != kUndecided; }
  Color color(NodeId v) const { return static_cast<Color>(state_[v].label); }
  bool nbr_active(std::size_t slot) const { return nbr_active_[slot] != 0; }
  std::uint8_t nbr_label(std::size_t slot) const { return nbr_label_[slot]; }
  std::uint64_t nbr_id(std::size_t slot) const { return nbr_id_[slot]; }

  const std::vector<Round>& starts() const { return start_; }
  // Safe upper bound on the last round any active node can need.
  Round round_budget() const;

 private:
  struct NodeState {
    std::uint64_t end_id[2] = {0, 0};
    std::uint32_t dist[2] = {kUnknown, kUnknown};
    std::uint32_t port[2] = {0, 0};
    std::uint32_t nbr_cv[2] = {kUnknown, kUnknown};
    std::uint32_t cv = 0;
    std::uint8_t label = kUndecided;
    std::uint8_t nports = 0;
    std::uint8_t role = 0;  // 0 path measurement, 1 colour reduction, 2 local minimum
    std::int8_t parent_side = -1;
    std::uint8_t final_mask = 0;
  };
  static constexpr std::uint32_t kUnknown = std::numeric_limits<std::uint32_t>::max();

  void start(Context& ctx);
  void begin_phase(Context& ctx);
  void on_token(Context& ctx, std::size_t port, const Msg& m);
  void finish_phase(Context& ctx);
  void cv_step(Context& ctx, int t);
  void pick_free_colour(Context& ctx);
  void decide(Context& ctx, Color c, bool to_path_ports, std::uint32_t cv = kUnknown);
  int side_of(NodeId v, std::size_t port) const;
  void decide_path_colour(Context& ctx);

  const Tree& tree_;
  const LevelMap& levels_;
  const NodeMask& active_;
  Variant variant_;
  int k_;
  std::vector<std::uint64_t> gammas_;
  std::vector<Round> start_;  // S_1..S_k (index 0 unused)
  std::vector<Round> end_;    // D_1..D_{k-1}
  int cv_iterations_;
  std::vector<NodeState> state_;
  std::vector<std::uint8_t> nbr_active_;
  std::vector<std::uint8_t> nbr_level_;
  std::vector<std::uint8_t> nbr_label_;
  std::vector<std::uint64_t> nbr_id_;
};

}  // namespace lcl::detail
