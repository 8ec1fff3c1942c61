#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lcl/labels.hpp"
#include "lcl/tree.hpp"

namespace lcl {

// Exhaustive solution enumeration for small instances. Node constraints are
// evaluated by a standalone predicate set (not the checkers), so the two can
// be compared against each other.
//
// Supported problems: Khier, Weighted (inputs taken from the tree), Dfree
// (inputs passed separately) and Hier. Labelings are produced in a fixed
// order: nodes in BFS order from node 0, each over its candidate list.
struct BruteForceOptions {
  std::uint64_t cap = 10'000'000;
};

// Size of the candidate space after per-node alphabet restrictions
// (saturates at UINT64_MAX).
std::uint64_t brute_force_space(const Tree& tree, const ProblemParams& params,
                                std::span<const DfreeInput> dfree_inputs = {});

// visit returns false to stop early. Throws if the space exceeds the cap.
void brute_force_visit(const Tree& tree, const ProblemParams& params, std::span<const DfreeInput> dfree_inputs,
                       const std::function<bool(const Labeling&)>& visit, BruteForceOptions options = {});

std::vector<Labeling> brute_force(const Tree& tree, const ProblemParams& params,
                                  std::span<const DfreeInput> dfree_inputs = {}, BruteForceOptions options = {});

std::uint64_t brute_force_count(const Tree& tree, const ProblemParams& params,
                                std::span<const DfreeInput> dfree_inputs = {}, BruteForceOptions options = {});

}  // namespace lcl
