#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lcl/labels.hpp"
#include "lcl/tree.hpp"

namespace lcl {

struct Violation {
  NodeId node = 0;
  std::string rule;
  std::string message;
};

struct Verdict {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has_rule(std::string_view rule) const;
};

// Stops collecting after max_violations (the default collects everything).
struct CheckLimits {
  std::size_t max_violations = std::numeric_limits<std::size_t>::max();
};

Verdict check_khier(const Tree& tree, const LevelMap& levels, std::span<const Color> out, int k, Variant variant,
                    CheckLimits limits = {});

// Same rules on the subgraph induced by mask; levels must be computed on that subgraph.
Verdict check_khier_masked(const Tree& tree, const LevelMap& levels, std::span<const Color> out, int k,
                           Variant variant, const NodeMask& mask, CheckLimits limits = {});

// Active nodes use NodeOutput::color, weight nodes NodeOutput::choice/secondary.
Verdict check_weighted(const Tree& tree, std::span<const InputLabel> inputs, std::span<const NodeOutput> out,
                       Variant z, int delta, int d, int k, CheckLimits limits = {});

// delta <= 0 means "use max(3, tree max degree)".
Verdict check_dfree(const Tree& tree, std::span<const DfreeInput> inputs, std::span<const WeightChoice> out, int d,
                    int delta = 0, const NodeMask& mask = {}, CheckLimits limits = {});

// orient is indexed by tree slot. Only edges inside mask are considered.
Verdict check_hier_labeling(const Tree& tree, std::span<const HierTag> tags, std::span<const Orient> orient, int k,
                            const NodeMask& mask = {}, CheckLimits limits = {});

// Active nodes use color; weight nodes use tag, secondary and orient.
Verdict check_weight_augmented(const Tree& tree, std::span<const InputLabel> inputs, const Labeling& out, int k,
                               CheckLimits limits = {});

// Throws if the two records of some edge disagree.
void check_orientation_consistency(const Tree& tree, std::span<const Orient> orient);

}  // namespace lcl
