#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lcl/labels.hpp"
#include "lcl/sim.hpp"
#include "lcl/tree.hpp"

namespace lcl {

// ---- path subroutines -----------------------------------------------------

// Proper W/B colouring of a path tree, W at the lower-id endpoint.
std::vector<Color> two_color_path(const Tree& path);

struct PathColoring {
  std::vector<Color> colors;
  Round rounds = 0;  // worst-case termination round
};

// Cole-Vishkin colour reduction followed by the 6 -> 3 shift, run in the
// engine. id_bound = 0 uses the largest id present.
PathColoring three_color_path(const Tree& path, std::uint64_t id_bound = 0);

// Rounds of Cole-Vishkin reduction needed to bring ids below id_bound to 6 colours (>= 1).
int cole_vishkin_iterations(std::uint64_t id_bound);

// ---- generic hierarchical algorithm ---------------------------------------

struct GenericParams {
  std::vector<std::uint64_t> gammas;  // gamma_1 .. gamma_{k-1}
  Variant variant = Variant::TwoHalf;
  std::uint64_t id_bound = 0;  // 0: largest id in the tree
};

// Node counts around phase i (1 <= i < k): nodes (inside the mask, level <= k)
// still running at the start of phase i and at the start of phase i+1.
struct PhaseStats {
  int phase = 0;
  Round start = 0;
  std::uint64_t before = 0;
  std::uint64_t after = 0;
  double bound = 0;  // 2(1+2^k) * before / gamma_i
  bool ok = true;
};

// Start rounds S_1..S_k of the phases (index 0 unused).
std::vector<Round> phase_starts(std::span<const std::uint64_t> gammas, int k);

struct GenericResult {
  std::vector<Color> colors;
  RunTrace trace;
  std::vector<Round> phase_start;
  std::vector<PhaseStats> phases;
  std::size_t shrink_violations = 0;
};

// Runs on the subgraph induced by mask (levels must be computed on it); nodes
// outside the mask terminate at round 0.
GenericResult generic_khier(const Tree& tree, const LevelMap& levels, const GenericParams& params,
                            const NodeMask& mask = {});

// gamma_i = ceil(n^alpha_i)
std::vector<std::uint64_t> gammas_poly(std::uint64_t n, std::span<const double> alphas);
// gamma_i = ceil(t^(2^(i-1))), t = (log* n)^(1/2^(k-1))
std::vector<std::uint64_t> gammas_logstar(std::uint64_t n, int k);

std::vector<PhaseStats> shrink_stats(const RunTrace& trace, const LevelMap& levels, std::span<const std::uint64_t> gammas,
                                     std::span<const Round> starts, const NodeMask& mask);

// ---- d-free weight problem ------------------------------------------------

struct MinCopyResult {
  std::vector<std::uint8_t> copy;  // per tree node; nodes outside the rooted region are 0
  std::uint64_t count = 0;
};

// Exact minimum number of Copy nodes around root: root copies, a Copy node may
// leave at most d neighbours declining, nodes deeper than depth_cap decline,
// and a declining node's subtree declines. Throws when infeasible.
MinCopyResult min_copy_assignment(const Tree& tree, NodeId root, int d, std::uint32_t depth_cap,
                                  const NodeMask& mask = {});

// Heaviest-subtree greedy (declines the d largest child subtrees at every Copy node).
// Upper bound for min_copy_assignment; throws if it would copy below depth_cap.
MinCopyResult greedy_copy_assignment(const Tree& tree, NodeId root, int d, std::uint32_t depth_cap,
                                     const NodeMask& mask = {});

// Smallest c >= 0 with (d+1)^c >= n.
std::uint32_t log_ceil(std::uint64_t n, int d);

struct SeedRecord {
  NodeId node = 0;
  std::uint64_t ball_size = 0;  // nodes within distance c
  std::uint64_t copies = 0;
  std::uint64_t greedy_copies = 0;
  double bound = 0;  // 6 |ball|^x
  bool ok = true;
};

struct DfreeResult {
  std::vector<WeightChoice> choices;
  std::uint32_t c = 0;
  Round rounds = 0;  // 3c + 3
  std::vector<SeedRecord> seeds;
  std::size_t copy_bound_violations = 0;
};

// Central evaluation of the O(log n) algorithm; every output depends only on
// the node's (3c+3)-hop view. x is the exponent used in the copy bound.
DfreeResult dfree_algorithm_A(const Tree& tree, std::span<const DfreeInput> inputs, int d, std::uint64_t n, double x,
                              const NodeMask& mask = {});

// ---- weighted problem -----------------------------------------------------

struct UndecidedCheck {
  int phase = 0;
  std::uint64_t undecided = 0;  // all nodes still running at the start of the phase
  double bound = 0;             // 7n (prod_{j<i} gamma_j)^(x-1)
  bool ok = true;
};

struct APolyOptions {
  Variant variant = Variant::TwoHalf;
  std::uint64_t n_known = 0;  // 0: tree size
  std::uint64_t id_bound = 0;
};

struct APolyResult {
  Labeling labels;
  RunTrace trace;
  std::vector<std::uint64_t> gammas;
  DfreeResult weight;
  std::vector<PhaseStats> phases;
  std::size_t shrink_violations = 0;
  std::vector<UndecidedCheck> undecided;
  std::size_t undecided_violations = 0;
};

APolyResult a_poly(const Tree& tree, int delta, int d, int k, const APolyOptions& options = {});

// ---- decomposition and hierarchical labeling ------------------------------

struct Decomposition {
  std::vector<std::uint8_t> compress;   // 1 for compress-layer nodes
  std::vector<std::uint16_t> layer;     // i >= 1; 0 outside the mask
  std::vector<std::uint32_t> sublayer;  // j in 1..gamma for rake nodes, 0 for compress nodes
  std::vector<Round> ready;             // round at which the node knows its layer
  std::uint64_t gamma = 0;
  std::uint64_t ell = 0;  // effective piece length (at least 2)
  int layers = 0;         // rake layers used
  Round rounds = 0;       // max ready round

  // Position in the total order (1,1) < ... < (1,gamma) < C_1 < (2,1) < ...
  std::uint64_t rank(NodeId v) const {
    const std::uint64_t base = (static_cast<std::uint64_t>(layer[v]) - 1) * (gamma + 2);
    return compress[v] ? base + gamma + 1 : base + sublayer[v];
  }
};

// gamma = ceil(n^(1/k) (ell/2)^(1-1/k))
std::uint64_t decomposition_gamma(std::uint64_t n, int k, std::uint64_t ell);

Decomposition rake_compress(const Tree& tree, std::uint64_t gamma, std::uint64_t ell, int max_layers,
                            const NodeMask& mask = {});

// Structural check of the three decomposition properties; returns problems found.
std::vector<std::string> validate_decomposition(const Tree& tree, const Decomposition& dec, const NodeMask& mask = {});

struct HierResult {
  Labeling labels;  // tag and orient
  RunTrace trace;
  Decomposition dec;
};

// gamma = 0 picks decomposition_gamma(|mask|, k, 4).
HierResult hier_labeling_solve(const Tree& tree, int k, const NodeMask& mask = {}, std::uint64_t gamma = 0);

struct WaugResult {
  Labeling labels;
  RunTrace trace;
  std::vector<std::uint64_t> gammas;
  Decomposition dec;
  std::vector<PhaseStats> phases;
  std::size_t shrink_violations = 0;
};

WaugResult weight_augmented_solve(const Tree& tree, int k, std::uint64_t n_known = 0, std::uint64_t id_bound = 0);

}  // namespace lcl
