#include "lcl/checkers.hpp"

#include <algorithm>

namespace lcl {

namespace {

class Collector {
 public:
  explicit Collector(CheckLimits limits) : limits_(limits) {}
  void add(NodeId v, const char* rule, std::string message) {
    if (!full()) verdict_.violations.push_back({v, rule, std::move(message)});
  }
  bool full() const { return verdict_.violations.size() >= limits_.max_violations; }
  void merge(Verdict&& other) {
    for (auto& x : other.violations)
      if (!full()) verdict_.violations.push_back(std::move(x));
  }
  Verdict take() { return std::move(verdict_); }

 private:
  CheckLimits limits_;
  Verdict verdict_;
};

std::string node_str(NodeId v) { return "node " + std::to_string(v); }

bool is_wb(Color c) { return c == Color::W || c == Color::B; }
bool is_rgy(Color c) { return c == Color::R || c == Color::G || c == Color::Y; }

void check_alphabet(Color c, Variant variant, NodeId v) {
  if (variant == Variant::TwoHalf && is_rgy(c))
    throw Error("label " + std::string(to_string(c)) + " at node " + std::to_string(v) + " is not in the 2.5 alphabet");
}

}  // namespace

bool Verdict::has_rule(std::string_view rule) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& x) { return x.rule == rule; });
}

Verdict check_khier(const Tree& tree, const LevelMap& levels, std::span<const Color> out, int k, Variant variant,
                    CheckLimits limits) {
  return check_khier_masked(tree, levels, out, k, variant, {}, limits);
}

Verdict check_khier_masked(const Tree& tree, const LevelMap& levels, std::span<const Color> out, int k,
                           Variant variant, const NodeMask& mask, CheckLimits limits) {
  if (levels.k != k) throw Error("level map was computed for k=" + std::to_string(levels.k) + ", expected " + std::to_string(k));
  if (out.size() != tree.size()) throw Error("output size does not match tree");
  for (NodeId v = 0; v < tree.size(); ++v)
    if (in_mask(mask, v)) check_alphabet(out[v], variant, v);

  Collector col(limits);
  const bool three = variant == Variant::ThreeHalf;
  for (NodeId v = 0; v < tree.size() && !col.full(); ++v) {
    if (!in_mask(mask, v)) continue;
    const int lv = levels.level[v];
    const Color c = out[v];
    const auto label = std::string(to_string(c));

    if (lv == k + 1) {
      if (c != Color::E) col.add(v, "khier.top-level-E", node_str(v) + " has level k+1 but outputs " + label);
      continue;
    }
    if (lv == 1 && c == Color::E) col.add(v, "khier.level1-no-E", node_str(v) + " has level 1 and outputs E");

    bool lower_colored = false;
    bool lower_not_d = false;
    for (NodeId u : tree.neighbors(v)) {
      if (!in_mask(mask, u) || levels.level[u] >= lv) continue;
      const Color cu = out[u];
      if (cu == Color::W || cu == Color::B || cu == Color::E) lower_colored = true;
      if (cu != Color::D) lower_not_d = true;
    }
    if (lv >= 2 && (c == Color::E) != lower_colored) {
      if (c == Color::E)
        col.add(v, "khier.E-iff-lower", node_str(v) + " outputs E without a lower-level neighbour labelled W, B or E");
      else
        col.add(v, "khier.E-iff-lower", node_str(v) + " has a lower-level neighbour labelled W, B or E but outputs " + label);
    }

    // Same-level constraints for W/B nodes: level <= k in 2.5, level < k in 3.5.
    if (is_wb(c) && (three ? lv < k : lv <= k)) {
      for (NodeId u : tree.neighbors(v)) {
        if (!in_mask(mask, u) || levels.level[u] != lv) continue;
        if (out[u] == c)
          col.add(v, "khier.same-color", node_str(v) + " and node " + std::to_string(u) + " share colour " + label);
        else if (out[u] == Color::D)
          col.add(v, "khier.color-next-to-D", node_str(v) + " outputs " + label + " next to same-level D node " + std::to_string(u));
      }
    }
    if (three && lv < k && is_rgy(c))
      col.add(v, "khier.rgy-below-k", node_str(v) + " has level " + std::to_string(lv) + " < k and outputs " + label);

    if (lv == k) {
      if (c == Color::D) col.add(v, "khier.levelk-no-D", node_str(v) + " has level k and outputs D");
      if (three && is_wb(c)) col.add(v, "khier.levelk-no-WB", node_str(v) + " has level k and outputs " + label);
      if (three && is_rgy(c)) {
        for (NodeId u : tree.neighbors(v))
          if (in_mask(mask, u) && levels.level[u] == k && out[u] == c)
            col.add(v, "khier.rgy-proper", node_str(v) + " and node " + std::to_string(u) + " share colour " + label);
      }
      if (c == Color::E && k >= 2 && !lower_not_d)
        col.add(v, "khier.levelk-E-source", node_str(v) + " outputs E at level k but every lower-level neighbour output D");
    }
  }
  return col.take();
}

Verdict check_weighted(const Tree& tree, std::span<const InputLabel> inputs, std::span<const NodeOutput> out,
                       Variant z, int delta, int d, int k, CheckLimits limits) {
  if (delta < d + 3) throw Error("weighted problem needs delta >= d+3 (delta=" + std::to_string(delta) + ", d=" + std::to_string(d) + ")");
  if (inputs.size() != tree.size() || out.size() != tree.size()) throw Error("inputs/outputs size does not match tree");

  NodeMask active(tree.size(), 0);
  for (NodeId v = 0; v < tree.size(); ++v) active[v] = inputs[v] == InputLabel::Active;
  std::vector<Color> colors(tree.size(), Color::W);
  for (NodeId v = 0; v < tree.size(); ++v)
    if (active[v]) colors[v] = out[v].color;
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (active[v] || out[v].secondary == Secondary::None) continue;
    if (!is_color(out[v].secondary)) throw Error("node " + std::to_string(v) + ": secondary output must be a colour");
    check_alphabet(color_of(out[v].secondary), z, v);
  }

  Collector col(limits);
  col.merge(check_khier_masked(tree, compute_levels(tree, k, active), colors, k, z, active, limits));

  for (NodeId v = 0; v < tree.size() && !col.full(); ++v) {
    if (active[v]) continue;
    const WeightChoice ch = out[v].choice;
    const Secondary sec = out[v].secondary;
    if ((ch == WeightChoice::Copy) != (sec != Secondary::None))
      col.add(v, "weighted.secondary-presence", node_str(v) + (ch == WeightChoice::Copy ? " outputs Copy without a secondary output" : " has a secondary output but does not Copy"));

    bool has_active = false;
    bool copies_active = false;
    int support = 0;
    int declines = 0;
    for (NodeId u : tree.neighbors(v)) {
      if (active[u]) {
        has_active = true;
        ++support;
        if (sec == secondary_of(colors[u])) copies_active = true;
        continue;
      }
      if (out[u].choice == WeightChoice::Connect) ++support;
      if (out[u].choice == WeightChoice::Decline) ++declines;
    }
    if (has_active && ch == WeightChoice::Decline)
      col.add(v, "weighted.P2", node_str(v) + " is adjacent to an Active node but outputs Decline");
    if (ch == WeightChoice::Connect && support < 2)
      col.add(v, "weighted.P3", node_str(v) + " outputs Connect with " + std::to_string(support) + " Active/Connect neighbours");
    if (ch == WeightChoice::Copy) {
      if (declines > d)
        col.add(v, "weighted.P4", node_str(v) + " outputs Copy with " + std::to_string(declines) + " Decline neighbours (d=" + std::to_string(d) + ")");
      if (has_active && !copies_active)
        col.add(v, "weighted.P5-active", node_str(v) + " does not copy the output of any Active neighbour");
      for (NodeId u : tree.neighbors(v))
        if (!active[u] && out[u].choice == WeightChoice::Copy && out[u].secondary != sec)
          col.add(v, "weighted.P5-copy", node_str(v) + " and Copy neighbour " + std::to_string(u) + " have different secondary outputs");
    }
  }
  return col.take();
}

Verdict check_dfree(const Tree& tree, std::span<const DfreeInput> inputs, std::span<const WeightChoice> out, int d,
                    int delta, const NodeMask& mask, CheckLimits limits) {
  if (delta <= 0) delta = std::max<int>(3, static_cast<int>(tree.max_degree()));
  if (delta < 3 || d < 0 || d >= delta) throw Error("d-free problem needs 0 <= d < delta and delta >= 3");
  if (inputs.size() != tree.size() || out.size() != tree.size()) throw Error("inputs/outputs size does not match tree");
  Collector col(limits);
  for (NodeId v = 0; v < tree.size() && !col.full(); ++v) {
    if (!in_mask(mask, v)) continue;
    int connect = 0;
    int connect_or_a = 0;
    int declines = 0;
    for (NodeId u : tree.neighbors(v)) {
      if (!in_mask(mask, u)) continue;
      if (out[u] == WeightChoice::Connect) ++connect;
      if (out[u] == WeightChoice::Connect || inputs[u] == DfreeInput::A) ++connect_or_a;
      if (out[u] == WeightChoice::Decline) ++declines;
    }
    const bool is_a = inputs[v] == DfreeInput::A;
    if (out[v] == WeightChoice::Connect) {
      if (is_a && connect < 1)
        col.add(v, "dfree.P1", node_str(v) + " (input A) outputs Connect without a Connect neighbour");
      if (!is_a && connect_or_a < 2)
        col.add(v, "dfree.P1", node_str(v) + " (input W) outputs Connect with " + std::to_string(connect_or_a) + " Connect-or-A neighbours");
    }
    if (out[v] == WeightChoice::Copy && declines > d)
      col.add(v, "dfree.P2", node_str(v) + " outputs Copy with " + std::to_string(declines) + " Decline neighbours (d=" + std::to_string(d) + ")");
    if (is_a && out[v] == WeightChoice::Decline)
      col.add(v, "dfree.P3", node_str(v) + " has input A but outputs Decline");
  }
  return col.take();
}

void check_orientation_consistency(const Tree& tree, std::span<const Orient> orient) {
  if (orient.size() != tree.slot_count()) throw Error("orientation array size does not match tree");
  for (std::size_t s = 0; s < tree.slot_count(); ++s) {
    const Orient a = orient[s];
    const Orient b = orient[tree.reverse_slot(s)];
    const bool consistent = (a == Orient::None && b == Orient::None) || (a == Orient::Out && b == Orient::In) ||
                            (a == Orient::In && b == Orient::Out);
    if (!consistent) {
      const NodeId u = tree.slot_target(tree.reverse_slot(s));
      throw Error("inconsistent orientation records on edge (" + std::to_string(u) + ", " +
                  std::to_string(tree.slot_target(s)) + ")");
    }
  }
}

Verdict check_hier_labeling(const Tree& tree, std::span<const HierTag> tags, std::span<const Orient> orient, int k,
                            const NodeMask& mask, CheckLimits limits) {
  if (k < 1) throw Error("k must be positive");
  if (tags.size() != tree.size()) throw Error("label array size does not match tree");
  check_orientation_consistency(tree, orient);
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (!in_mask(mask, v)) continue;
    const HierTag t = tags[v];
    if (t.index < 1 || (t.compress ? t.index > k - 1 : t.index > k))
      throw Error("label " + to_string(t) + " at node " + std::to_string(v) + " is not valid for k=" + std::to_string(k));
  }

  Collector col(limits);
  for (NodeId v = 0; v < tree.size() && !col.full(); ++v) {
    if (!in_mask(mask, v)) continue;
    const HierTag t = tags[v];
    auto nb = tree.neighbors(v);
    int outgoing = 0;
    int compress_nbrs = 0;
    int same_compress = 0;
    int compress_in = 0;
    bool unoriented = false;
    for (std::size_t p = 0; p < nb.size(); ++p) {
      const NodeId u = nb[p];
      if (!in_mask(mask, u)) continue;
      const Orient o = orient[tree.slot(v, p)];
      const HierTag tu = tags[u];
      if (o == Orient::None) unoriented = true;
      if (o == Orient::Out) {
        ++outgoing;
        if (tu.rank() < t.rank())
          col.add(v, "hier.rule3", node_str(v) + " (" + to_string(t) + ") points to node " + std::to_string(u) + " with smaller label " + to_string(tu));
      }
      if (tu.compress) {
        ++compress_nbrs;
        if (o == Orient::In) ++compress_in;
        if (t.compress && tu.index == t.index) ++same_compress;
        if (t.compress && tu.index != t.index)
          col.add(v, "hier.rule5", node_str(v) + " (" + to_string(t) + ") is adjacent to node " + std::to_string(u) + " (" + to_string(tu) + ")");
      }
    }
    if (!t.compress && unoriented)
      col.add(v, "hier.rule1", node_str(v) + " has a rake label and an unoriented incident edge");
    if (t.compress && compress_nbrs >= 2) {
      if (outgoing != 0)
        col.add(v, "hier.rule2", node_str(v) + " is a compress node with two compress neighbours and has an outgoing edge");
    } else if (outgoing > 1) {
      col.add(v, "hier.rule2", node_str(v) + " has " + std::to_string(outgoing) + " outgoing edges");
    }
    if (t.compress && same_compress > 2)
      col.add(v, "hier.rule4", node_str(v) + " has " + std::to_string(same_compress) + " neighbours with label " + to_string(t));
    if (!t.compress) {
      if (compress_in > 1)
        col.add(v, "hier.rule6", node_str(v) + " has " + std::to_string(compress_in) + " compress neighbours pointing to it");
      if (compress_in == 1) {
        for (std::size_t p = 0; p < nb.size(); ++p) {
          const NodeId u = nb[p];
          if (in_mask(mask, u) && orient[tree.slot(v, p)] == Orient::In && tags[u].rank() >= t.rank())
            col.add(v, "hier.rule6", node_str(v) + " has a compress in-neighbour and in-neighbour " + std::to_string(u) + " whose label is not smaller");
        }
      }
    }
  }
  return col.take();
}

Verdict check_weight_augmented(const Tree& tree, std::span<const InputLabel> inputs, const Labeling& out, int k,
                               CheckLimits limits) {
  if (k < 1) throw Error("k must be positive");
  if (inputs.size() != tree.size() || out.nodes.size() != tree.size()) throw Error("inputs/outputs size does not match tree");
  check_orientation_consistency(tree, out.orient);

  NodeMask active(tree.size(), 0);
  NodeMask weight(tree.size(), 0);
  std::vector<Color> colors(tree.size(), Color::W);
  std::vector<HierTag> tags(tree.size());
  for (NodeId v = 0; v < tree.size(); ++v) {
    active[v] = inputs[v] == InputLabel::Active;
    weight[v] = !active[v];
    if (active[v]) colors[v] = out.nodes[v].color;
    else tags[v] = out.nodes[v].tag;
  }
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (active[v]) continue;
    const Secondary s = out.nodes[v].secondary;
    if (s != Secondary::None && s != Secondary::Decline) check_alphabet(color_of(s), Variant::TwoHalf, v);
  }

  Collector col(limits);
  col.merge(check_khier_masked(tree, compute_levels(tree, k, active), colors, k, Variant::TwoHalf, active, limits));
  if (!col.full()) col.merge(check_hier_labeling(tree, tags, out.orient, k, weight, limits));

  for (NodeId v = 0; v < tree.size() && !col.full(); ++v) {
    if (active[v]) continue;
    const Secondary sec = out.nodes[v].secondary;
    const HierTag t = tags[v];
    if (sec == Secondary::None) {
      col.add(v, "waug.secondary-missing", node_str(v) + " has no secondary output");
      continue;
    }
    auto nb = tree.neighbors(v);
    int active_nbrs = 0;
    int active_out = 0;
    NodeId target = 0;
    for (std::size_t p = 0; p < nb.size(); ++p) {
      if (!active[nb[p]]) continue;
      ++active_nbrs;
      if (out.orient[tree.slot(v, p)] == Orient::Out) {
        ++active_out;
        target = nb[p];
      }
    }
    if (active_nbrs > 0) {
      if (active_out != 1)
        col.add(v, "waug.rule3", node_str(v) + " orients " + std::to_string(active_out) + " edges towards Active neighbours (expected 1)");
      else if (sec != secondary_of(colors[target]))
        col.add(v, "waug.rule3", node_str(v) + " does not copy the output of Active node " + std::to_string(target));
    }
    if (!t.compress && active_out == 0) {
      for (std::size_t p = 0; p < nb.size(); ++p) {
        const NodeId u = nb[p];
        if (!weight[u] || out.orient[tree.slot(v, p)] != Orient::Out) continue;
        const Secondary su = out.nodes[u].secondary;
        if (su != Secondary::Decline && su != sec)
          col.add(v, "waug.rule4", node_str(v) + " points to weight node " + std::to_string(u) + " but has a different secondary output");
      }
    }
    if (!t.compress && sec == Secondary::Decline)
      col.add(v, "waug.rule5", node_str(v) + " has a rake label and secondary Decline");
    if (t.compress && active_nbrs == 0 && sec != Secondary::Decline)
      col.add(v, "waug.rule5", node_str(v) + " is a compress node without Active neighbour and does not Decline");
    if (t.compress && active_nbrs > 0 && sec == Secondary::Decline)
      col.add(v, "waug.rule5", node_str(v) + " is a compress node adjacent to an Active node but outputs Decline");
  }
  return col.take();
}

}  // namespace lcl
