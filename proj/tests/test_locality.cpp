// Each node's output may depend only on the ids inside the ball whose radius is
// its termination round. Ids outside that ball are redrawn and the run repeated.
#include <doctest.h>

#include <set>

#include "lcl/algorithms.hpp"
#include "lcl/generators.hpp"
#include "support.hpp"

using namespace lcl;

namespace {

std::vector<std::uint64_t> redraw_outside(const Tree& t, NodeId v, Round radius, std::uint64_t id_bound, Rng& rng) {
  auto depth = test::bfs_depth(t, v);
  std::vector<std::uint64_t> ids = t.ids();
  std::set<std::uint64_t> used;
  for (NodeId u = 0; u < t.size(); ++u)
    if (depth[u] <= radius) used.insert(ids[u]);
  for (NodeId u = 0; u < t.size(); ++u) {
    if (depth[u] <= radius) continue;
    std::uint64_t x;
    do {
      x = 1 + uniform_below(rng, id_bound);
    } while (!used.insert(x).second);
    ids[u] = x;
  }
  return ids;
}

template <class Solve>
std::size_t audit(const Tree& t, std::uint64_t id_bound, std::uint64_t seed, Solve solve) {
  const auto [base_out, base_rounds] = solve(t);
  Rng rng(seed);
  std::size_t mismatches = 0;
  for (NodeId v = 0; v < t.size(); ++v) {
    Tree other = t.with_ids(redraw_outside(t, v, base_rounds[v], id_bound, rng));
    const auto [out, rounds] = solve(other);
    if (!(out[v] == base_out[v]) || rounds[v] != base_rounds[v]) ++mismatches;
  }
  return mismatches;
}

}  // namespace

TEST_CASE("generic solver is local") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Tree t;
    if (seed % 2) {
      const std::uint64_t len[] = {2 + seed % 5, 6, 3};
      t = lower_bound_graph(len).tree;
    } else {
      t = random_tree(40 + 20 * seed, 3 + seed % 3, seed);
    }
    REQUIRE(t.size() <= 200);
    const std::uint64_t bound = 4 * t.size();
    t = t.with_ids(random_ids(t.size(), 4, seed));
    const int k = seed % 2 ? 3 : 2;
    const LevelMap lm = compute_levels(t, k);
    for (Variant var : {Variant::TwoHalf, Variant::ThreeHalf}) {
      auto solve = [&](const Tree& tree) {
        GenericParams p;
        p.gammas = std::vector<std::uint64_t>(k - 1, 3 + seed % 4);
        p.variant = var;
        p.id_bound = bound;
        auto r = generic_khier(tree, lm, p);
        return std::pair{r.colors, r.trace.termination_round};
      };
      INFO("seed " << seed);
      CHECK(audit(t, bound, seed, solve) == 0);
    }
  }
}

TEST_CASE("weighted solver is local") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t n = 60 + 25 * seed;
    Tree base = random_tree(n, 5, seed);
    Rng rng(seed + 100);
    std::vector<InputLabel> in(n);
    for (auto& x : in) x = uniform_below(rng, 3) == 0 ? InputLabel::Active : InputLabel::Weight;
    const std::uint64_t bound = 4 * n;
    Tree t = build_tree(n, base.edges(), in, random_ids(n, 4, seed));
    for (Variant var : {Variant::TwoHalf, Variant::ThreeHalf}) {
      auto solve = [&](const Tree& tree) {
        APolyOptions opt;
        opt.variant = var;
        opt.n_known = n;
        opt.id_bound = bound;
        auto r = a_poly(tree, 5, 2, 2, opt);
        return std::pair{r.labels.nodes, r.trace.termination_round};
      };
      INFO("seed " << seed);
      CHECK(audit(t, bound, seed, solve) == 0);
    }
  }
}

TEST_CASE("the audit notices a non-local output") {
  // Every node outputs the parity of the largest id in the tree at round 0.
  Tree t = random_tree(30, 3, 1).with_ids(random_ids(30, 4, 1));
  auto solve = [](const Tree& tree) {
    std::vector<int> out(tree.size(), static_cast<int>(tree.max_id() % 2));
    return std::pair{out, std::vector<Round>(tree.size(), 0)};
  };
  CHECK(audit(t, 120, 1, solve) > 0);
}
