#include "lcl/brute_force.hpp"

#include <limits>

namespace lcl {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

bool wb(Color c) { return c == Color::W || c == Color::B; }
bool rgy(Color c) { return c == Color::R || c == Color::G || c == Color::Y; }

std::vector<Color> color_alphabet(Variant z) {
  if (z == Variant::TwoHalf) return {Color::W, Color::B, Color::E, Color::D};
  return {Color::W, Color::B, Color::E, Color::D, Color::R, Color::G, Color::Y};
}

// Colours a node of level lv may take at all.
std::vector<Color> level_alphabet(int lv, int k, Variant z) {
  if (lv == k + 1) return {Color::E};
  std::vector<Color> out;
  if (z == Variant::ThreeHalf && lv == k) {
    out = {Color::R, Color::G, Color::Y};
  } else {
    out = {Color::W, Color::B};
    if (lv < k) out.push_back(Color::D);
  }
  if (lv >= 2) out.push_back(Color::E);
  return out;
}

class Search {
 public:
  Search(const Tree& tree, const ProblemParams& p, std::span<const DfreeInput> dfree)
      : t_(tree), p_(p), dfree_(dfree.begin(), dfree.end()) {
    const std::size_t n = t_.size();
    if (p_.k < 1 && (p_.problem == Problem::Khier || p_.problem == Problem::Weighted || p_.problem == Problem::Hier))
      throw Error("k must be positive");
    if (p_.problem == Problem::WeightAugmented) throw Error("brute force does not support the weight-augmented problem");
    if (p_.problem == Problem::Dfree) {
      if (dfree_.size() != n) throw Error("d-free brute force needs one input per node");
      if (p_.delta <= 0) p_.delta = std::max<int>(3, static_cast<int>(t_.max_degree()));
      if (p_.delta < 3 || p_.d < 0 || p_.d >= p_.delta) throw Error("d-free problem needs 0 <= d < delta and delta >= 3");
    }
    if (p_.problem == Problem::Weighted && p_.delta < p_.d + 3) throw Error("weighted problem needs delta >= d+3");

    active_.assign(n, 1);
    if (p_.problem == Problem::Weighted)
      for (NodeId v = 0; v < n; ++v) active_[v] = t_.input(v) == InputLabel::Active;
    if (p_.problem == Problem::Khier || p_.problem == Problem::Weighted)
      level_ = compute_levels(t_, p_.k, p_.problem == Problem::Weighted ? active_ : NodeMask{}).level;

    build_candidates();
    build_order();
  }

  std::uint64_t space() const {
    std::uint64_t s = 1;
    for (const auto& c : cand_) s = sat_mul(s, c.size());
    if (p_.problem == Problem::Hier)
      for (std::size_t i = 1; i < t_.size(); ++i) s = sat_mul(s, 3);
    return s;
  }

  void run(const std::function<bool(const Labeling&)>& visit) {
    visit_ = &visit;
    cur_.nodes.assign(t_.size(), NodeOutput{});
    if (p_.problem == Problem::Hier) cur_.orient.assign(t_.slot_count(), Orient::None);
    if (t_.size() > 0) step(0);
  }

 private:
  void build_candidates() {
    const std::size_t n = t_.size();
    cand_.resize(n);
    for (NodeId v = 0; v < n; ++v) {
      auto& c = cand_[v];
      switch (p_.problem) {
        case Problem::Khier:
          for (Color x : level_alphabet(level_[v], p_.k, p_.variant)) c.push_back(NodeOutput{.color = x});
          break;
        case Problem::Weighted: {
          if (active_[v]) {
            for (Color x : level_alphabet(level_[v], p_.k, p_.variant)) c.push_back(NodeOutput{.color = x});
            break;
          }
          bool touches_active = false;
          for (NodeId u : t_.neighbors(v)) touches_active |= active_[u] != 0;
          if (!touches_active) c.push_back(NodeOutput{.choice = WeightChoice::Decline});
          c.push_back(NodeOutput{.choice = WeightChoice::Connect});
          for (Color x : color_alphabet(p_.variant))
            c.push_back(NodeOutput{.choice = WeightChoice::Copy, .secondary = secondary_of(x)});
          break;
        }
        case Problem::Dfree:
          if (dfree_[v] == DfreeInput::W) c.push_back(NodeOutput{.choice = WeightChoice::Decline});
          c.push_back(NodeOutput{.choice = WeightChoice::Connect});
          c.push_back(NodeOutput{.choice = WeightChoice::Copy});
          break;
        case Problem::Hier:
          for (int i = 1; i <= p_.k; ++i) {
            c.push_back(NodeOutput{.tag = HierTag{false, static_cast<std::uint8_t>(i)}});
            if (i < p_.k) c.push_back(NodeOutput{.tag = HierTag{true, static_cast<std::uint8_t>(i)}});
          }
          break;
        default:
          break;
      }
    }
  }

  void build_order() {
    const std::size_t n = t_.size();
    std::vector<std::size_t> pos(n, n);
    parent_.assign(n, 0);
    if (n == 0) return;
    order_.push_back(0);
    pos[0] = 0;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const NodeId v = order_[head];
      for (NodeId u : t_.neighbors(v)) {
        if (pos[u] != n) continue;
        pos[u] = order_.size();
        parent_[u] = v;
        order_.push_back(u);
      }
    }
    // A node is checked once its whole closed neighbourhood has been assigned.
    ready_at_.resize(n);
    for (NodeId v = 0; v < n; ++v) {
      std::size_t last = pos[v];
      for (NodeId u : t_.neighbors(v)) last = std::max(last, pos[u]);
      ready_at_[last].push_back(v);
    }
  }

  bool step(std::size_t idx) {
    if (idx == order_.size()) return (*visit_)(cur_);
    const NodeId v = order_[idx];
    for (const NodeOutput& c : cand_[v]) {
      cur_.nodes[v] = c;
      if (p_.problem == Problem::Hier && idx > 0) {
        const NodeId par = parent_[v];
        const std::size_t down = t_.slot(par, t_.port_of(par, v));
        const std::size_t up = t_.reverse_slot(down);
        for (int o = 0; o < 3; ++o) {
          cur_.orient[down] = o == 0 ? Orient::None : (o == 1 ? Orient::Out : Orient::In);
          cur_.orient[up] = o == 0 ? Orient::None : (o == 1 ? Orient::In : Orient::Out);
          if (ready_ok(idx) && !step(idx + 1)) return false;
        }
      } else if (ready_ok(idx) && !step(idx + 1)) {
        return false;
      }
    }
    return true;
  }

  bool ready_ok(std::size_t idx) const {
    for (NodeId v : ready_at_[idx])
      if (!node_ok(v)) return false;
    return true;
  }

  bool node_ok(NodeId v) const {
    switch (p_.problem) {
      case Problem::Khier: return coloring_ok(v);
      case Problem::Weighted: return active_[v] ? coloring_ok(v) : weight_ok(v);
      case Problem::Dfree: return dfree_ok(v);
      case Problem::Hier: return hier_ok(v);
      default: return false;
    }
  }

  bool coloring_ok(NodeId v) const {
    const int k = p_.k;
    const int lv = level_[v];
    const Color c = cur_.nodes[v].color;
    if (lv == k + 1) return true;
    const bool three = p_.variant == Variant::ThreeHalf;
    bool lower_colored = false;
    bool lower_non_d = false;
    for (NodeId u : t_.neighbors(v)) {
      if (!active_[u]) continue;
      const Color cu = cur_.nodes[u].color;
      if (level_[u] < lv) {
        lower_colored |= cu == Color::W || cu == Color::B || cu == Color::E;
        lower_non_d |= cu != Color::D;
      } else if (level_[u] == lv) {
        const bool colour_level = three ? lv < k : lv <= k;
        if (wb(c) && colour_level && (cu == c || cu == Color::D)) return false;
        if (three && lv == k && rgy(c) && cu == c) return false;
      }
    }
    if (lv >= 2 && (c == Color::E) != lower_colored) return false;
    if (lv == k && c == Color::E && !lower_non_d) return false;
    return true;
  }

  bool weight_ok(NodeId v) const {
    const NodeOutput& o = cur_.nodes[v];
    int support = 0;
    int declines = 0;
    bool any_active = false;
    bool matches_active = false;
    for (NodeId u : t_.neighbors(v)) {
      const NodeOutput& ou = cur_.nodes[u];
      if (active_[u]) {
        ++support;
        any_active = true;
        matches_active |= o.secondary == secondary_of(ou.color);
        continue;
      }
      if (ou.choice == WeightChoice::Connect) ++support;
      if (ou.choice == WeightChoice::Decline) ++declines;
      if (o.choice == WeightChoice::Copy && ou.choice == WeightChoice::Copy && ou.secondary != o.secondary) return false;
    }
    if (o.choice == WeightChoice::Connect) return support >= 2;
    if (o.choice == WeightChoice::Copy) return declines <= p_.d && (!any_active || matches_active);
    return !any_active;
  }

  bool dfree_ok(NodeId v) const {
    const WeightChoice ch = cur_.nodes[v].choice;
    const bool is_a = dfree_[v] == DfreeInput::A;
    if (is_a && ch == WeightChoice::Decline) return false;
    int connect = 0;
    int connect_or_a = 0;
    int declines = 0;
    for (NodeId u : t_.neighbors(v)) {
      const WeightChoice cu = cur_.nodes[u].choice;
      connect += cu == WeightChoice::Connect;
      connect_or_a += cu == WeightChoice::Connect || dfree_[u] == DfreeInput::A;
      declines += cu == WeightChoice::Decline;
    }
    if (ch == WeightChoice::Connect) return is_a ? connect >= 1 : connect_or_a >= 2;
    if (ch == WeightChoice::Copy) return declines <= p_.d;
    return true;
  }

  bool hier_ok(NodeId v) const {
    const HierTag t = cur_.nodes[v].tag;
    auto nb = t_.neighbors(v);
    int out = 0;
    int compress_nbrs = 0;
    int same_label = 0;
    int compress_in = 0;
    for (std::size_t p = 0; p < nb.size(); ++p) {
      const HierTag tu = cur_.nodes[nb[p]].tag;
      const Orient o = cur_.orient[t_.slot(v, p)];
      if (!t.compress && o == Orient::None) return false;
      if (o == Orient::Out) {
        ++out;
        if (tu.rank() < t.rank()) return false;
      }
      if (tu.compress) {
        ++compress_nbrs;
        if (t.compress && tu.index != t.index) return false;
        if (t.compress) ++same_label;
        if (o == Orient::In) ++compress_in;
      }
    }
    if (out > 1) return false;
    if (t.compress && compress_nbrs >= 2 && out > 0) return false;
    if (same_label > 2) return false;
    if (!t.compress && compress_in > 0) {
      if (compress_in > 1) return false;
      for (std::size_t p = 0; p < nb.size(); ++p)
        if (cur_.orient[t_.slot(v, p)] == Orient::In && cur_.nodes[nb[p]].tag.rank() >= t.rank()) return false;
    }
    return true;
  }

  const Tree& t_;
  ProblemParams p_;
  std::vector<DfreeInput> dfree_;
  NodeMask active_;
  std::vector<std::uint8_t> level_;
  std::vector<std::vector<NodeOutput>> cand_;
  std::vector<NodeId> order_;
  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> ready_at_;
  Labeling cur_;
  const std::function<bool(const Labeling&)>* visit_ = nullptr;
};

}  // namespace

std::uint64_t brute_force_space(const Tree& tree, const ProblemParams& params, std::span<const DfreeInput> dfree_inputs) {
  return Search(tree, params, dfree_inputs).space();
}

void brute_force_visit(const Tree& tree, const ProblemParams& params, std::span<const DfreeInput> dfree_inputs,
                       const std::function<bool(const Labeling&)>& visit, BruteForceOptions options) {
  Search search(tree, params, dfree_inputs);
  const std::uint64_t space = search.space();
  if (space > options.cap)
    throw Error("brute force search space " + (space == kSaturated ? std::string("overflow") : std::to_string(space)) +
                " exceeds cap " + std::to_string(options.cap));
  search.run(visit);
}

std::vector<Labeling> brute_force(const Tree& tree, const ProblemParams& params, std::span<const DfreeInput> dfree_inputs,
                                  BruteForceOptions options) {
  std::vector<Labeling> out;
  brute_force_visit(tree, params, dfree_inputs, [&](const Labeling& l) {
    out.push_back(l);
    return true;
  }, options);
  return out;
}

std::uint64_t brute_force_count(const Tree& tree, const ProblemParams& params, std::span<const DfreeInput> dfree_inputs,
                                BruteForceOptions options) {
  std::uint64_t count = 0;
  brute_force_visit(tree, params, dfree_inputs, [&](const Labeling&) {
    ++count;
    return true;
  }, options);
  return count;
}

}  // namespace lcl
