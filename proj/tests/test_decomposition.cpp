#include <doctest.h>

#include <cmath>
#include <map>

#include "lcl/algorithms.hpp"
#include "lcl/checkers.hpp"
#include "lcl/generators.hpp"
#include "support.hpp"

using namespace lcl;

namespace {

std::vector<HierTag> tags_of(const Labeling& l) {
  std::vector<HierTag> t;
  for (const auto& o : l.nodes) t.push_back(o.tag);
  return t;
}

// Active node 0 attached to the root of a balanced weight tree on nodes 1..w.
Tree active_with_weight_tree(std::size_t delta, std::size_t w) {
  Tree wt = balanced_regular_tree(delta, w);
  std::vector<Edge> e{{0, 1}};
  for (auto [a, b] : wt.edges()) e.push_back({a + 1, b + 1});
  std::vector<InputLabel> in(w + 1, InputLabel::Weight);
  in[0] = InputLabel::Active;
  return build_tree(w + 1, e, in);
}

// Sizes of the connected components of compress nodes in one layer.
std::vector<std::size_t> compress_runs(const Tree& t, const Decomposition& dec) {
  std::vector<std::size_t> sizes;
  std::vector<std::uint8_t> seen(t.size(), 0);
  for (NodeId v = 0; v < t.size(); ++v) {
    if (!dec.compress[v] || seen[v]) continue;
    std::size_t count = 0;
    std::vector<NodeId> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      ++count;
      for (NodeId y : t.neighbors(x))
        if (dec.compress[y] && !seen[y] && dec.layer[y] == dec.layer[x]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
    sizes.push_back(count);
  }
  return sizes;
}

}  // namespace

TEST_CASE("decomposition_gamma") {
  CHECK(decomposition_gamma(10'000, 2, 4) == static_cast<std::uint64_t>(std::ceil(100 * std::sqrt(2.0))));
  CHECK(decomposition_gamma(1, 1, 4) == 1);
  CHECK(decomposition_gamma(1000, 1, 4) == 1000);
}

TEST_CASE("star: one rake layer") {
  const Edge star[] = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  Tree s = build_tree(star);
  auto dec = rake_compress(s, 3, 4, 2);
  CHECK(dec.layers == 1);
  for (NodeId v = 0; v < s.size(); ++v) {
    CHECK(dec.layer[v] == 1);
    CHECK(dec.compress[v] == 0);
  }
  CHECK(dec.sublayer[0] == 2);
  CHECK(validate_decomposition(s, dec).empty());
}

TEST_CASE("long path: compress pieces of 4 to 8 nodes") {
  Tree p = path_graph(100);
  auto dec = rake_compress(p, 1, 4, 10);
  CHECK(validate_decomposition(p, dec).empty());
  auto runs = compress_runs(p, dec);
  REQUIRE(!runs.empty());
  for (auto r : runs) {
    CHECK(r >= 4);
    CHECK(r <= 8);
  }
}

TEST_CASE("random trees: at most two rake layers for k = 2") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Tree t = random_tree(10'000, 3 + seed % 3, seed);
    auto dec = rake_compress(t, decomposition_gamma(t.size(), 2, 4), 4, 2);
    CHECK(dec.layers <= 2);
    for (NodeId v = 0; v < t.size(); ++v)
      if (dec.compress[v]) CHECK(dec.layer[v] == 1);
    CHECK(validate_decomposition(t, dec).empty());
    CHECK(dec.rounds <= 2 * 2 * std::sqrt(10'000.0));
  }
}

TEST_CASE("rake_compress throws when layers run out") {
  Tree p = path_graph(3);
  // gamma = 1 rakes only the two ends; the middle needs a second layer.
  CHECK_THROWS_AS(rake_compress(p, 1, 4, 1), Error);
  CHECK_NOTHROW(rake_compress(p, 1, 4, 2));
}

TEST_CASE("validator catches a broken decomposition") {
  Tree p = path_graph(100);
  auto dec = rake_compress(p, 1, 4, 10);
  NodeId c = 0;
  while (!dec.compress[c]) ++c;
  auto bad = dec;
  bad.compress[c] = 0;
  bad.sublayer[c] = 1;
  CHECK(!validate_decomposition(p, bad).empty());
  bad = dec;
  bad.layer[0] = 0;
  CHECK(!validate_decomposition(p, bad).empty());
}

TEST_CASE("hier labeling examples") {
  Tree p = path_graph(20);
  auto r = hier_labeling_solve(p, 2);
  CHECK(check_hier_labeling(p, tags_of(r.labels), r.labels.orient, 2).ok());

  const Edge star[] = {{0, 1}, {0, 2}, {0, 3}};
  Tree s = build_tree(star);
  auto rs = hier_labeling_solve(s, 2);
  for (NodeId v = 0; v < 4; ++v) CHECK(rs.labels.nodes[v].tag == HierTag{false, 1});
  for (NodeId v = 1; v < 4; ++v) CHECK(rs.labels.orient[s.slot(v, 0)] == Orient::Out);
  CHECK(check_hier_labeling(s, tags_of(rs.labels), rs.labels.orient, 2).ok());
}

TEST_CASE("hier labeling on fuzzed trees") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const std::size_t n = 1 + (seed * 997) % 3000;
    Tree t = test::fuzz_tree(n, 3 + seed % 3, seed);
    const int k = 2 + static_cast<int>(seed % 3);
    auto r = hier_labeling_solve(t, k);
    auto tags = tags_of(r.labels);
    INFO("seed " << seed);
    REQUIRE(check_hier_labeling(t, tags, r.labels.orient, k).ok());
    REQUIRE(validate_decomposition(t, r.dec).empty());
    // Adjacent compress nodes always share the same index.
    for (auto [u, v] : t.edges())
      if (tags[u].compress && tags[v].compress) REQUIRE(tags[u] == tags[v]);
    for (NodeId v = 0; v < t.size(); ++v) REQUIRE(r.trace.termination_round[v] == r.dec.ready[v] + 1);
  }
}

TEST_CASE("weight-augmented: Active path with weight trees") {
  // Active path 0..9; node i carries a balanced weight tree of 12 nodes.
  const std::size_t spine = 10, w = 12;
  std::vector<Edge> e;
  std::vector<InputLabel> in(spine, InputLabel::Active);
  for (NodeId i = 1; i < spine; ++i) e.push_back({i - 1, i});
  Tree wt = balanced_regular_tree(4, w);
  for (NodeId i = 0; i < spine; ++i) {
    const NodeId base = static_cast<NodeId>(in.size());
    e.push_back({i, base});
    for (auto [a, b] : wt.edges()) e.push_back({base + a, base + b});
    in.insert(in.end(), w, InputLabel::Weight);
  }
  Tree t = build_tree(in.size(), e, in).with_ids(random_ids(in.size(), 2, 8));
  auto res = weight_augmented_solve(t, 2);
  CHECK(check_weight_augmented(t, t.inputs(), res.labels, 2).ok());
  CHECK(res.shrink_violations == 0);
}

TEST_CASE("weight-augmented without weight nodes is a 2.5 colouring") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Tree t = test::fuzz_tree(200, 4, seed);
    auto res = weight_augmented_solve(t, 2);
    CHECK(check_khier(t, compute_levels(t, 2), colors_of(res.labels), 2, Variant::TwoHalf).ok());
    GenericParams p;
    p.gammas = res.gammas;
    auto gen = generic_khier(t, compute_levels(t, 2), p);
    CHECK(colors_of(res.labels) == gen.colors);
  }
}

TEST_CASE("weight-augmented: many weight nodes copy a lone Active node") {
  // Complete trees only: the counting argument needs every subtree of the
  // root to hold exactly a 1/(delta-1) share.
  for (std::size_t delta : {3u, 4u, 5u}) {
    std::vector<std::size_t> sizes;
    for (std::size_t w = 1, level = 1; w < 20'000; level *= delta - 1, w += level) sizes.push_back(w);
    for (std::size_t w : sizes) {
      Tree t = active_with_weight_tree(delta, w);
      for (int k : {2, 3}) {
        auto res = weight_augmented_solve(t, k);
        REQUIRE(check_weight_augmented(t, t.inputs(), res.labels, k).ok());
        const Secondary mine = secondary_of(res.labels.nodes[0].color);
        std::size_t copies = 0;
        for (NodeId v = 1; v <= w; ++v) copies += res.labels.nodes[v].secondary == mine;
        double bound = static_cast<double>(w) - (k - 1);
        for (int i = 1; i < k; ++i) bound -= static_cast<double>(w) / std::pow(static_cast<double>(delta - 1), i);
        INFO("delta " << delta << " w " << w << " k " << k);
        CHECK(static_cast<double>(copies) >= bound);
      }
    }
  }
}

TEST_CASE("weight-augmented on fuzzed instances") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const std::size_t n = 2 + (seed * 53) % 600;
    Tree base = test::fuzz_tree(n, 3 + seed % 3, seed);
    Rng rng(seed);
    std::vector<InputLabel> in(n);
    for (auto& x : in) x = uniform_below(rng, 4) == 0 ? InputLabel::Active : InputLabel::Weight;
    Tree t = build_tree(n, base.edges(), in, base.ids());
    const int k = 2 + static_cast<int>(seed % 2);
    auto res = weight_augmented_solve(t, k);
    INFO("seed " << seed);
    REQUIRE(check_weight_augmented(t, in, res.labels, k).ok());
  }
}
