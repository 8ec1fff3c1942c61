#include "lcl/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace lcl {

namespace {

void check_delta_d(int delta, int d) {
  if (d < 0 || delta < d + 3)
    throw Error("parameters need delta >= d+3 (delta=" + std::to_string(delta) + ", d=" + std::to_string(d) + ")");
}

std::uint64_t round_value(double v, Rounding r) {
  if (r == Rounding::Ceil) return static_cast<std::uint64_t>(std::ceil(v - 1e-9));
  return static_cast<std::uint64_t>(std::floor(v + 0.5));
}

std::vector<double> geometric_seq(double first, double ratio, int count) {
  std::vector<double> out;
  double a = first;
  for (int i = 0; i < count; ++i) {
    out.push_back(a);
    a *= ratio;
  }
  return out;
}

// The log formulas only need delta-d-1 >= 1; x = 0 at delta = d+2.
void check_formula_domain(int delta, int d) {
  if (d < 0 || delta < 3 || delta < d + 2)
    throw Error("parameters need delta >= 3 and delta >= d+2 (delta=" + std::to_string(delta) + ", d=" + std::to_string(d) + ")");
}

}  // namespace

void check_weighted_params(int delta, int d) { check_delta_d(delta, d); }

double x_factor(int delta, int d) {
  check_formula_domain(delta, d);
  return std::log(static_cast<double>(delta - d - 1)) / std::log(static_cast<double>(delta - 1));
}

double x_prime(int delta, int d) {
  check_formula_domain(delta, d);
  return std::log(static_cast<double>(delta - d + 1)) / std::log(static_cast<double>(delta - 1));
}

std::pair<int, int> params_from_rational(int p, int q) {
  if (p <= 0 || q <= p || q > 29) throw Error("need 0 < p < q <= 29");
  return {(1 << q) + 1, (1 << q) - (1 << p)};
}

double alpha_poly(double x, int k) {
  if (k < 1) throw Error("k must be positive");
  double sum = 0;
  for (int j = 0; j < k; ++j) sum += std::pow(2.0 - x, j);
  return 1.0 / sum;
}

std::vector<double> alpha_seq_poly(double x, int k) { return geometric_seq(alpha_poly(x, k), 2.0 - x, k - 1); }

double alpha_logstar(double x, int k) {
  if (k < 1) throw Error("k must be positive");
  double sum = 0;
  for (int j = 0; j + 1 < k; ++j) sum += std::pow(2.0 - x, j);
  return 1.0 / (1.0 + (1.0 - x) * sum);
}

std::vector<double> alpha_seq_logstar(double x, int k) { return geometric_seq(alpha_logstar(x, k), 2.0 - x, k - 1); }

int iterated_log(double n) {
  if (!(n >= 1)) throw Error("iterated_log needs n >= 1");
  int count = 0;
  while (n > 1) {
    n = std::log2(n);
    ++count;
  }
  return count;
}

std::vector<std::uint64_t> lengths_from_exponents(std::uint64_t n, std::span<const double> alphas, Regime regime,
                                                  Rounding rounding) {
  if (n == 0) throw Error("n must be positive");
  const double sum = std::accumulate(alphas.begin(), alphas.end(), 0.0);
  if (regime == Regime::Poly && sum >= 1.0) throw Error("exponents must sum to less than 1");
  const double base = regime == Regime::Poly ? static_cast<double>(n) : static_cast<double>(iterated_log(static_cast<double>(n)));
  std::vector<std::uint64_t> out;
  double prod = 1;
  for (double a : alphas) {
    if (a <= 0) throw Error("exponents must be positive");
    const std::uint64_t l = round_value(std::pow(base, a), rounding);
    if (l < 1) throw Error("length rounds below 1");
    out.push_back(l);
    prod *= static_cast<double>(l);
  }
  const std::uint64_t last = round_value(static_cast<double>(n) / prod, Rounding::HalfUp);
  if (last < 1) throw Error("top-level length rounds below 1");
  out.push_back(last);
  return out;
}

LowerBoundGraph lower_bound_graph(std::span<const std::uint64_t> lengths, std::size_t max_degree) {
  const int k = static_cast<int>(lengths.size());
  if (k < 2) throw Error("lower bound graph needs k >= 2");
  for (auto l : lengths)
    if (l < 1) throw Error("path lengths must be positive");
  // Count nodes first so every array is allocated once.
  std::uint64_t total = 0;
  std::uint64_t per_level = 1;
  for (int i = k - 1; i >= 0; --i) {
    per_level *= lengths[i];
    total += per_level;
    if (total > std::numeric_limits<NodeId>::max() / 2) throw Error("lower bound graph too large");
  }

  std::vector<Edge> edges;
  edges.reserve(total - 1);
  std::vector<std::uint8_t> nominal(total, 0);
  std::vector<NodeId> upper;
  NodeId next = 0;
  for (std::uint64_t j = 0; j < lengths[k - 1]; ++j) {
    nominal[next] = static_cast<std::uint8_t>(k);
    if (j > 0) edges.emplace_back(next - 1, next);
    upper.push_back(next++);
  }
  for (int i = k - 1; i >= 1; --i) {
    std::vector<NodeId> created;
    created.reserve(upper.size() * lengths[i - 1]);
    for (NodeId v : upper) {
      for (std::uint64_t j = 0; j < lengths[i - 1]; ++j) {
        nominal[next] = static_cast<std::uint8_t>(i);
        edges.emplace_back(j == 0 ? v : next - 1, next);
        created.push_back(next++);
      }
    }
    upper = std::move(created);
  }

  LowerBoundGraph g;
  g.tree = build_tree(total, edges);
  if (g.tree.max_degree() > max_degree)
    throw Error("lower bound graph has degree " + std::to_string(g.tree.max_degree()) + " > bound " +
                std::to_string(max_degree));
  g.levels = compute_levels(g.tree, k);
  g.nominal_level = std::move(nominal);
  return g;
}

Instance weighted_construction(std::uint64_t n, std::span<const std::uint64_t> lengths, int delta, int d) {
  const int k = static_cast<int>(lengths.size());
  if (k < 2) throw Error("weighted construction needs k >= 2");
  check_delta_d(delta, d);
  if (n < static_cast<std::uint64_t>(k)) throw Error("n too small for the weighted construction");

  const double shrink = std::pow(static_cast<double>(k), 1.0 / k);
  std::vector<std::uint64_t> scaled(k);
  for (int i = 0; i + 1 < k; ++i)
    scaled[i] = std::max<std::uint64_t>(1, round_value(static_cast<double>(lengths[i]) / shrink, Rounding::HalfUp));
  // Nodes contributed by one spine node: 1 + l'_{k-1}(1 + l'_{k-2}(...)).
  std::uint64_t per_spine = 1;
  for (int i = 0; i + 1 < k; ++i) per_spine = 1 + scaled[i] * per_spine;
  const std::uint64_t budget = n / static_cast<std::uint64_t>(k);
  scaled[k - 1] = std::max<std::uint64_t>(
      1, round_value(static_cast<double>(budget) / static_cast<double>(per_spine), Rounding::HalfUp));

  LowerBoundGraph core = lower_bound_graph(scaled, 3);
  const std::size_t active = core.tree.size();

  std::vector<Edge> edges = core.tree.edges();
  std::vector<std::uint64_t> attached(active, 0);
  nlohmann::json level_sizes = nlohmann::json::array();
  for (int i = 2; i <= k; ++i) {
    std::vector<NodeId> members;
    for (NodeId v = 0; v < active; ++v)
      if (core.levels.level[v] == i) members.push_back(v);
    if (members.empty()) throw Error("level " + std::to_string(i) + " of the core graph is empty");
    const std::uint64_t base = budget / members.size();
    const std::uint64_t extra = budget % members.size();
    for (std::size_t j = 0; j < members.size(); ++j) attached[members[j]] = base + (j < extra ? 1 : 0);
    level_sizes.push_back(members.size());
  }

  std::uint64_t total = active;
  for (auto w : attached) total += w;
  if (total > std::numeric_limits<NodeId>::max() / 2) throw Error("instance too large");
  edges.reserve(total - 1);
  std::vector<InputLabel> inputs(total, InputLabel::Weight);
  std::fill(inputs.begin(), inputs.begin() + static_cast<std::ptrdiff_t>(active), InputLabel::Active);

  // Balanced tree shape: node c > 0 hangs below (c-1)/(delta-1).
  NodeId next = static_cast<NodeId>(active);
  const std::uint64_t fan = static_cast<std::uint64_t>(delta - 1);
  for (NodeId v = 0; v < active; ++v) {
    const std::uint64_t w = attached[v];
    if (w == 0) continue;
    const NodeId root = next;
    edges.emplace_back(v, root);
    for (std::uint64_t c = 1; c < w; ++c) edges.emplace_back(root + static_cast<NodeId>((c - 1) / fan), root + static_cast<NodeId>(c));
    next += static_cast<NodeId>(w);
  }

  Instance inst;
  inst.tree = build_tree(total, edges, std::move(inputs));
  if (inst.tree.max_degree() > static_cast<std::size_t>(delta))
    throw Error("weighted construction exceeds degree bound " + std::to_string(delta));
  nlohmann::json orig = nlohmann::json::array();
  nlohmann::json prime = nlohmann::json::array();
  for (int i = 0; i < k; ++i) {
    orig.push_back(lengths[i]);
    prime.push_back(scaled[i]);
  }
  inst.meta = {{"family", "weighted"},
               {"k", k},
               {"delta", delta},
               {"d", d},
               {"n_target", n},
               {"lengths", orig},
               {"lengths_scaled", prime},
               {"active", active},
               {"active_residual", static_cast<std::int64_t>(active) - static_cast<std::int64_t>(budget)},
               {"weight_per_level", budget},
               {"level_sizes", level_sizes},
               {"rounding", "half-up"}};
  return inst;
}

}  // namespace lcl
