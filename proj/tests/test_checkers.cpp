#include <doctest.h>

#include "lcl/brute_force.hpp"
#include "lcl/checkers.hpp"
#include "lcl/generators.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace lcl;

namespace {

std::vector<Color> alternating(std::size_t n) {
  std::vector<Color> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = i % 2 ? Color::B : Color::W;
  return c;
}

void orient(const Tree& t, std::vector<Orient>& o, NodeId from, NodeId to) {
  const std::size_t s = t.slot(from, t.port_of(from, to));
  o[s] = Orient::Out;
  o[t.reverse_slot(s)] = Orient::In;
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

}  // namespace

TEST_CASE("khier: proper 2-colouring of a path") {
  Tree p = path_graph(6);
  auto c = alternating(6);
  CHECK(check_khier(p, compute_levels(p, 2), c, 2, Variant::TwoHalf).ok());
}

TEST_CASE("khier: same colour neighbours are rejected") {
  Tree p = path_graph(4);
  auto c = alternating(4);
  c[3] = Color::W;
  Verdict v = check_khier(p, compute_levels(p, 2), c, 2, Variant::TwoHalf);
  CHECK(v.has_rule("khier.same-color"));
  // Both endpoints of the bad edge report it.
  CHECK(v.violations.size() == 2);
}

TEST_CASE("khier: all-D path is valid when no level-k node exists") {
  Tree p = path_graph(5);
  std::vector<Color> d(5, Color::D);
  CHECK(check_khier(p, compute_levels(p, 2), d, 2, Variant::TwoHalf).ok());
  const ProblemParams pp{Problem::Khier, Variant::TwoHalf, 2};
  bool found = false;
  brute_force_visit(p, pp, {}, [&](const Labeling& l) {
    found |= colors_of(l) == d;
    return !found;
  });
  CHECK(found);
}

TEST_CASE("khier: level rules") {
  // Star: leaves level 1, centre level 2 = k.
  const Edge star[] = {{0, 1}, {0, 2}, {0, 3}};
  Tree s = build_tree(star);
  LevelMap lm = compute_levels(s, 2);
  using C = Color;
  CHECK(check_khier(s, lm, std::vector<C>{C::E, C::W, C::B, C::W}, 2, Variant::TwoHalf).ok());
  CHECK(check_khier(s, lm, std::vector<C>{C::W, C::D, C::D, C::D}, 2, Variant::TwoHalf).ok());
  CHECK(check_khier(s, lm, std::vector<C>{C::D, C::D, C::D, C::D}, 2, Variant::TwoHalf).has_rule("khier.levelk-no-D"));
  CHECK(check_khier(s, lm, std::vector<C>{C::W, C::W, C::D, C::D}, 2, Variant::TwoHalf).has_rule("khier.E-iff-lower"));
  CHECK(check_khier(s, lm, std::vector<C>{C::E, C::D, C::D, C::D}, 2, Variant::TwoHalf).has_rule("khier.E-iff-lower"));
  CHECK(check_khier(s, lm, std::vector<C>{C::E, C::E, C::W, C::W}, 2, Variant::TwoHalf).has_rule("khier.level1-no-E"));
  CHECK(check_khier(s, lm, std::vector<C>{C::R, C::D, C::D, C::D}, 2, Variant::ThreeHalf).ok());
  CHECK(check_khier(s, lm, std::vector<C>{C::W, C::D, C::D, C::D}, 2, Variant::ThreeHalf).has_rule("khier.levelk-no-WB"));
  CHECK(check_khier(s, lm, std::vector<C>{C::R, C::R, C::D, C::D}, 2, Variant::ThreeHalf).has_rule("khier.rgy-below-k"));
  CHECK_THROWS_AS(check_khier(s, lm, std::vector<C>{C::R, C::D, C::D, C::D}, 2, Variant::TwoHalf), Error);
  CHECK_THROWS_AS(check_khier(s, compute_levels(s, 3), std::vector<C>(4, C::D), 2, Variant::TwoHalf), Error);

  // Path: every node at level 1 = k when k = 1; W next to D is fine across levels only.
  Tree p = path_graph(3);
  CHECK(check_khier(p, compute_levels(p, 2), std::vector<C>{C::W, C::D, C::D}, 2, Variant::TwoHalf)
            .has_rule("khier.color-next-to-D"));
  CHECK(check_khier(p, compute_levels(p, 1), std::vector<C>{C::R, C::G, C::R}, 1, Variant::ThreeHalf).ok());
  CHECK(check_khier(p, compute_levels(p, 1), std::vector<C>{C::R, C::R, C::G}, 1, Variant::ThreeHalf)
            .has_rule("khier.rgy-proper"));
}

TEST_CASE("khier: level-k E needs a non-D lower neighbour, level k+1 must be E") {
  // Node 0 has four leaves: level 2 when k = 1, so it must output E.
  const Edge star4[] = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  Tree s = build_tree(star4);
  using C = Color;
  CHECK(check_khier(s, compute_levels(s, 1), std::vector<C>{C::W, C::W, C::W, C::W, C::W}, 1, Variant::TwoHalf)
            .has_rule("khier.top-level-E"));
  // Two adjacent level-2 nodes, each with level-1 leaves. A level-k node whose
  // lower neighbours all output D cannot choose E.
  const Edge e[] = {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}, {3, 6}};
  Tree t = build_tree(e);
  LevelMap lm = compute_levels(t, 2);
  REQUIRE(lm.level[0] == 2);
  REQUIRE(lm.level[3] == 2);
  std::vector<C> out{C::E, C::D, C::D, C::W, C::D, C::D, C::D};
  Verdict v = check_khier(t, lm, out, 2, Variant::TwoHalf);
  CHECK(v.has_rule("khier.levelk-E-source"));
}

TEST_CASE("checkers report every violation unless limited") {
  Tree p = path_graph(8);
  std::vector<Color> w(8, Color::W);
  Verdict all = check_khier(p, compute_levels(p, 2), w, 2, Variant::TwoHalf);
  CHECK(all.violations.size() == 14);
  Verdict some = check_khier(p, compute_levels(p, 2), w, 2, Variant::TwoHalf, CheckLimits{3});
  CHECK(some.violations.size() == 3);
}

TEST_CASE("weighted: all-Active instance is equivalent to khier") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Tree t = test::fuzz_tree(7, 4, seed);
    const ProblemParams pp{Problem::Khier, Variant::TwoHalf, 2};
    auto sols = brute_force(t, pp);
    REQUIRE(!sols.empty());
    LevelMap lm = compute_levels(t, 2);
    std::vector<InputLabel> in(t.size(), InputLabel::Active);
    for (std::size_t i : {std::size_t{0}, sols.size() / 2}) {
      auto colors = colors_of(sols[i]);
      Verdict a = check_khier(t, lm, colors, 2, Variant::TwoHalf);
      Verdict b = check_weighted(t, in, sols[i].nodes, Variant::TwoHalf, 5, 2, 2);
      CHECK(a.ok());
      CHECK(b.ok());
    }
    // Also on an invalid labelling: identical rule lists.
    std::vector<Color> bad(t.size(), Color::W);
    std::vector<NodeOutput> bad_out(t.size());
    Verdict a = check_khier(t, lm, bad, 2, Variant::TwoHalf);
    Verdict b = check_weighted(t, in, bad_out, Variant::TwoHalf, 5, 2, 2);
    REQUIRE(a.violations.size() == b.violations.size());
    for (std::size_t i = 0; i < a.violations.size(); ++i) {
      CHECK(a.violations[i].node == b.violations[i].node);
      CHECK(a.violations[i].rule == b.violations[i].rule);
      CHECK(a.violations[i].message == b.violations[i].message);
    }
  }
}

TEST_CASE("weighted: property checks") {
  Tree t = active_with_weight_tree(5, 5);
  std::vector<NodeOutput> out(6);
  out[0].color = Color::W;
  for (NodeId v = 1; v < 6; ++v) out[v] = {.choice = WeightChoice::Copy, .secondary = Secondary::W};
  CHECK(check_weighted(t, t.inputs(), out, Variant::TwoHalf, 5, 2, 2).ok());

  auto bad = out;
  bad[1] = {.choice = WeightChoice::Decline};
  CHECK(check_weighted(t, t.inputs(), bad, Variant::TwoHalf, 5, 2, 2).has_rule("weighted.P2"));

  // Root copies and leaves decline: 4 Decline neighbours > d = 2.
  bad = out;
  for (NodeId v = 2; v < 6; ++v) bad[v] = {.choice = WeightChoice::Decline};
  CHECK(check_weighted(t, t.inputs(), bad, Variant::TwoHalf, 5, 2, 2).has_rule("weighted.P4"));
  CHECK(check_weighted(t, t.inputs(), bad, Variant::TwoHalf, 6, 3, 2).has_rule("weighted.P4"));
  bad[2] = bad[3] = out[2];
  CHECK(check_weighted(t, t.inputs(), bad, Variant::TwoHalf, 5, 2, 2).ok());

  bad = out;
  bad[1].secondary = Secondary::B;
  Verdict v = check_weighted(t, t.inputs(), bad, Variant::TwoHalf, 5, 2, 2);
  CHECK(v.has_rule("weighted.P5-active"));
  CHECK(v.has_rule("weighted.P5-copy"));

  bad = out;
  bad[3] = {.choice = WeightChoice::Connect};
  CHECK(check_weighted(t, t.inputs(), bad, Variant::TwoHalf, 5, 2, 2).has_rule("weighted.P3"));
  bad[3].secondary = Secondary::W;
  CHECK(check_weighted(t, t.inputs(), bad, Variant::TwoHalf, 5, 2, 2).has_rule("weighted.secondary-presence"));

  CHECK_THROWS_AS(check_weighted(t, t.inputs(), out, Variant::TwoHalf, 4, 2, 2), Error);
}

TEST_CASE("dfree examples") {
  Tree p = path_graph(4);
  using W = WeightChoice;
  std::vector<DfreeInput> all_w(4, DfreeInput::W);
  CHECK(check_dfree(p, all_w, std::vector<W>(4, W::Decline), 1).ok());

  std::vector<DfreeInput> awwa{DfreeInput::A, DfreeInput::W, DfreeInput::W, DfreeInput::A};
  CHECK(check_dfree(p, awwa, std::vector<W>(4, W::Connect), 1).ok());
  CHECK(check_dfree(p, awwa, std::vector<W>{W::Connect, W::Connect, W::Decline, W::Copy}, 1).has_rule("dfree.P1"));
  CHECK(check_dfree(p, awwa, std::vector<W>{W::Decline, W::Decline, W::Decline, W::Copy}, 1).has_rule("dfree.P3"));

  const Edge star[] = {{0, 1}, {0, 2}, {0, 3}};
  Tree s = build_tree(star);
  std::vector<DfreeInput> center_a{DfreeInput::A, DfreeInput::W, DfreeInput::W, DfreeInput::W};
  CHECK(check_dfree(s, center_a, std::vector<W>{W::Copy, W::Decline, W::Decline, W::Decline}, 2).has_rule("dfree.P2"));
  CHECK(check_dfree(s, center_a, std::vector<W>{W::Copy, W::Decline, W::Decline, W::Copy}, 2).ok());
  CHECK_THROWS_AS(check_dfree(s, center_a, std::vector<W>(4, W::Copy), 3, 3), Error);
}

TEST_CASE("dfree star: every Copy centre has at most d Decline leaves") {
  const Edge star[] = {{0, 1}, {0, 2}, {0, 3}};
  Tree s = build_tree(star);
  std::vector<DfreeInput> in{DfreeInput::A, DfreeInput::W, DfreeInput::W, DfreeInput::W};
  const ProblemParams pp{Problem::Dfree, Variant::TwoHalf, 1, 3, 2};
  // All 3^4 labelings through the checker.
  auto from_checker = test::checker_solutions(s, pp, in);
  auto from_brute = test::brute_solutions(s, pp, in);
  CHECK(from_checker == from_brute);
  std::size_t copy_centres = 0;
  for (const auto& l : brute_force(s, pp, in)) {
    if (l.nodes[0].choice != WeightChoice::Copy) continue;
    ++copy_centres;
    int declines = 0;
    for (NodeId v = 1; v < 4; ++v) declines += l.nodes[v].choice == WeightChoice::Decline;
    CHECK(declines <= 2);
  }
  CHECK(copy_centres > 0);
}

TEST_CASE("hier labeling examples") {
  const Edge star[] = {{0, 1}, {0, 2}, {0, 3}};
  Tree s = build_tree(star);
  std::vector<HierTag> r1(4, HierTag{false, 1});
  std::vector<Orient> o(s.slot_count(), Orient::None);
  for (NodeId v = 1; v < 4; ++v) orient(s, o, v, 0);
  CHECK(check_hier_labeling(s, r1, o, 2).ok());

  auto o2 = o;
  o2[s.slot(1, 0)] = Orient::None;
  o2[s.reverse_slot(s.slot(1, 0))] = Orient::None;
  CHECK(check_hier_labeling(s, r1, o2, 2).has_rule("hier.rule1"));

  // Centre with two outgoing edges.
  auto o3 = o;
  orient(s, o3, 0, 1);
  orient(s, o3, 0, 2);
  CHECK(check_hier_labeling(s, r1, o3, 2).has_rule("hier.rule2"));

  Tree p = path_graph(2);
  std::vector<Orient> po(p.slot_count(), Orient::None);
  CHECK(check_hier_labeling(p, std::vector<HierTag>{{true, 1}, {true, 2}}, po, 3).has_rule("hier.rule5"));

  orient(p, po, 0, 1);
  CHECK(check_hier_labeling(p, std::vector<HierTag>{{false, 2}, {false, 1}}, po, 2).has_rule("hier.rule3"));
  CHECK(check_hier_labeling(p, std::vector<HierTag>{{false, 1}, {false, 2}}, po, 2).ok());

  std::vector<Orient> broken(p.slot_count(), Orient::None);
  broken[0] = Orient::Out;
  CHECK_THROWS_AS(check_hier_labeling(p, std::vector<HierTag>(2), broken, 2), Error);
  CHECK_THROWS_AS(check_hier_labeling(p, std::vector<HierTag>{{true, 2}, {false, 1}}, po, 2), Error);
}

TEST_CASE("hier labeling: compress runs") {
  // Path 0..4 with 1,2,3 compress: interior node 2 has two compress neighbours.
  Tree p = path_graph(5);
  const HierTag r1{false, 1}, c1{true, 1}, r2{false, 2};
  std::vector<HierTag> tags{r2, c1, c1, c1, r2};
  std::vector<Orient> o(p.slot_count(), Orient::None);
  orient(p, o, 1, 0);
  orient(p, o, 3, 4);
  CHECK(check_hier_labeling(p, tags, o, 2).ok());
  // Interior compress node may not have an outgoing edge.
  auto o2 = o;
  orient(p, o2, 2, 1);
  CHECK(check_hier_labeling(p, tags, o2, 2).has_rule("hier.rule2"));
  // Rake node with two compress in-neighbours.
  Tree q = path_graph(3);
  std::vector<Orient> qo(q.slot_count(), Orient::None);
  orient(q, qo, 0, 1);
  orient(q, qo, 2, 1);
  CHECK(check_hier_labeling(q, std::vector<HierTag>{c1, r2, c1}, qo, 2).has_rule("hier.rule6"));
  // Compress in-neighbour plus an in-neighbour of equal rank.
  CHECK(check_hier_labeling(q, std::vector<HierTag>{c1, r2, r2}, qo, 2).has_rule("hier.rule6"));
  CHECK(check_hier_labeling(q, std::vector<HierTag>{c1, r2, r1}, qo, 2).ok());
  // A C_1 node with three C_1 neighbours.
  const Edge claw[] = {{0, 1}, {0, 2}, {0, 3}};
  Tree s = build_tree(claw);
  std::vector<Orient> so(s.slot_count(), Orient::None);
  CHECK(check_hier_labeling(s, std::vector<HierTag>(4, c1), so, 2).has_rule("hier.rule4"));
}

TEST_CASE("weight-augmented examples") {
  Tree t = active_with_weight_tree(5, 5);
  Labeling l;
  l.nodes.resize(6);
  l.orient.assign(t.slot_count(), Orient::None);
  l.nodes[0].color = Color::B;
  orient(t, l.orient, 1, 0);
  for (NodeId v = 2; v < 6; ++v) orient(t, l.orient, v, 1);
  for (NodeId v = 1; v < 6; ++v) l.nodes[v] = {.tag = {false, 1}, .secondary = Secondary::B};
  CHECK(check_weight_augmented(t, t.inputs(), l, 2).ok());

  auto bad = l;
  bad.nodes[1] = {.tag = {true, 1}, .secondary = Secondary::Decline};
  CHECK(check_weight_augmented(t, t.inputs(), bad, 2).has_rule("waug.rule5"));

  bad = l;
  bad.nodes[3].secondary = Secondary::Decline;
  Verdict v = check_weight_augmented(t, t.inputs(), bad, 2);
  CHECK(v.has_rule("waug.rule5"));

  bad = l;
  bad.nodes[3].secondary = Secondary::W;
  CHECK(check_weight_augmented(t, t.inputs(), bad, 2).has_rule("waug.rule4"));

  bad = l;
  bad.nodes[1].secondary = Secondary::W;
  CHECK(check_weight_augmented(t, t.inputs(), bad, 2).has_rule("waug.rule3"));

  bad = l;
  bad.nodes[4].secondary = Secondary::None;
  CHECK(check_weight_augmented(t, t.inputs(), bad, 2).has_rule("waug.secondary-missing"));
}

TEST_CASE("checking is pure and deterministic") {
  Tree t = test::fuzz_tree(40, 4, 3);
  LevelMap lm = compute_levels(t, 2);
  std::vector<Color> c(t.size(), Color::W);
  Verdict a = check_khier(t, lm, c, 2, Variant::TwoHalf);
  Verdict b = check_khier(t, lm, c, 2, Variant::TwoHalf);
  REQUIRE(a.violations.size() == b.violations.size());
  for (std::size_t i = 0; i < a.violations.size(); ++i) CHECK(a.violations[i].message == b.violations[i].message);
}
