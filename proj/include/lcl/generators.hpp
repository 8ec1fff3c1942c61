#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lcl/tree.hpp"

namespace lcl {

// x = log(delta-d-1)/log(delta-1). Defined for delta >= d+2 (x = 0 at the
// boundary); the weighted problem itself needs delta >= d+3.
double x_factor(int delta, int d);
// x' = log(delta-d+1)/log(delta-1).
double x_prime(int delta, int d);

// Throws unless delta >= d+3 and d >= 0.
void check_weighted_params(int delta, int d);

// (delta, d) = (2^q + 1, 2^q - 2^p), for which x_factor is exactly p/q.
std::pair<int, int> params_from_rational(int p, int q);

// alpha_1 = 1 / sum_{j<k} (2-x)^j, alpha_i = (2-x) alpha_{i-1}.
double alpha_poly(double x, int k);
std::vector<double> alpha_seq_poly(double x, int k);  // alpha_1 .. alpha_{k-1}

// alpha_1 = 1 / (1 + (1-x) sum_{j<k-1} (2-x)^j), same recurrence.
double alpha_logstar(double x, int k);
std::vector<double> alpha_seq_logstar(double x, int k);

// Number of log2 applications until the value is <= 1: 2 -> 1, 16 -> 3, 65536 -> 4.
int iterated_log(double n);

enum class Regime : std::uint8_t { Poly, Logstar };
enum class Rounding : std::uint8_t { HalfUp, Ceil };

// l_i = n^alpha_i (poly) or (log* n)^alpha_i (logstar) for i < k, then
// l_k = round(n / prod l_i). k = alphas.size() + 1.
std::vector<std::uint64_t> lengths_from_exponents(std::uint64_t n, std::span<const double> alphas, Regime regime,
                                                  Rounding rounding = Rounding::HalfUp);

struct LowerBoundGraph {
  Tree tree;
  LevelMap levels;                          // compute_levels(tree, k)
  std::vector<std::uint8_t> nominal_level;  // level of the path each node was created in
};

// Spine path of l_k nodes; every node of a level-(i+1) path gets a level-i path
// of l_i nodes hanging off its first node. Nodes are numbered in creation order.
// Path ends have degree <= 2 and peel early, which cascades upwards through
// paths of length 1; `levels` reflects that, `nominal_level` does not.
LowerBoundGraph lower_bound_graph(std::span<const std::uint64_t> lengths, std::size_t max_degree = 3);

struct Instance {
  Tree tree;
  nlohmann::json meta = nlohmann::json::object();
};

// Active core: lower_bound_graph(l'_1..l'_k) with l'_i = max(1, round(l_i / k^{1/k})), l'_k
// chosen so the core has about n/k nodes. Each level i in 2..k gets a budget of n/k weight
// nodes split evenly over its nodes (remainder one per node, lowest index first), each share
// forming a balanced_regular_tree(delta, .) whose root is attached to the node.
Instance weighted_construction(std::uint64_t n, std::span<const std::uint64_t> lengths, int delta, int d);

}  // namespace lcl
