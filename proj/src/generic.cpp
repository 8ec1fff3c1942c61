#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "generic_core.hpp"
#include "lcl/generators.hpp"

namespace lcl {

namespace detail {

namespace {

Color cv_color(std::uint32_t c) {
  static constexpr Color kMap[3] = {Color::R, Color::G, Color::Y};
  return kMap[c];
}

}  // namespace

GenericCore::GenericCore(const Tree& tree, const LevelMap& levels, const NodeMask& active, Variant variant,
                         std::vector<std::uint64_t> gammas, std::uint64_t id_bound)
    : tree_(tree),
      levels_(levels),
      active_(active),
      variant_(variant),
      k_(levels.k),
      gammas_(std::move(gammas)),
      state_(tree.size()),
      nbr_active_(tree.slot_count(), 0),
      nbr_level_(tree.slot_count(), 0),
      nbr_label_(tree.slot_count(), kUndecided),
      nbr_id_(tree.slot_count(), 0) {
  if (levels.level.size() != tree.size()) throw Error("level map does not match tree");
  if (gammas_.size() + 1 != static_cast<std::size_t>(k_))
    throw Error("expected " + std::to_string(k_ - 1) + " gammas for k=" + std::to_string(k_) + ", got " +
                std::to_string(gammas_.size()));
  for (auto g : gammas_)
    if (g < 1) throw Error("gammas must be positive");
  start_ = phase_starts(gammas_, k_);
  end_.assign(k_ + 1, 0);
  for (int i = 1; i < k_; ++i) end_[i] = start_[i] + static_cast<Round>(2 * gammas_[i - 1]);
  cv_iterations_ = cole_vishkin_iterations(std::max(id_bound, tree.max_id()));
}

Round GenericCore::round_budget() const {
  return start_[k_] + static_cast<Round>(tree_.size()) + static_cast<Round>(cv_iterations_) + 16;
}

void GenericCore::absorb(Context& ctx) {
  const NodeId v = ctx.node();
  for (std::size_t p = 0; p < ctx.degree(); ++p) {
    const Msg* m = ctx.received(p);
    if (!m) continue;
    const std::size_t s = tree_.slot(v, p);
    if (m->kind == kHello) {
      nbr_active_[s] = 1;
      nbr_level_[s] = m->level;
      nbr_label_[s] = m->label;
      nbr_id_[s] = m->id;
    } else if (m->kind == kDecided && nbr_active_[s]) {
      nbr_label_[s] = m->label;
    }
  }
}

int GenericCore::side_of(NodeId v, std::size_t port) const {
  const NodeState& st = state_[v];
  for (int i = 0; i < st.nports; ++i)
    if (st.port[i] == port) return i;
  return -1;
}

void GenericCore::decide(Context& ctx, Color c, bool to_path_ports, std::uint32_t cv) {
  NodeState& st = state_[ctx.node()];
  st.label = code(c);
  Msg m;
  m.kind = kDecided;
  m.label = st.label;
  if (cv != kUnknown) {
    m.value = cv;
    m.flags = kFinalColour;
  }
  for (std::size_t p = 0; p < ctx.degree(); ++p)
    if (to_path_ports || side_of(ctx.node(), p) < 0) ctx.send(p, m);
  ctx.terminate();
}

void GenericCore::step(Context& ctx) {
  const NodeId v = ctx.node();
  if (ctx.round() == 0) {
    start(ctx);
    return;
  }
  absorb(ctx);
  NodeState& st = state_[v];
  const int lv = levels_.level[v];
  const Round r = ctx.round();

  // A node above level 1 next to a lower-level W/B/E neighbour must output E.
  if (lv >= 2 && r < start_[lv]) {
    for (std::size_t p = 0; p < ctx.degree(); ++p) {
      const std::size_t s = tree_.slot(v, p);
      if (!nbr_active_[s] || nbr_level_[s] >= lv) continue;
      const std::uint8_t l = nbr_label_[s];
      if (l == code(Color::W) || l == code(Color::B) || l == code(Color::E)) {
        decide(ctx, Color::E, true);
        return;
      }
    }
  }

  const bool colour_reduction = lv == k_ && variant_ == Variant::ThreeHalf;
  if (r > start_[lv]) {
    for (std::size_t p = 0; p < ctx.degree(); ++p) {
      const Msg* m = ctx.received(p);
      if (!m) continue;
      const int side = side_of(v, p);
      if (side < 0) continue;
      if (m->kind == kToken) {
        on_token(ctx, p, *m);
        if (ctx.terminated()) return;
      } else if (colour_reduction && (m->kind == kColour || (m->kind == kDecided && (m->flags & kFinalColour)))) {
        st.nbr_cv[side] = m->value;
        if (m->kind == kDecided) st.final_mask |= static_cast<std::uint8_t>(1u << side);
      }
    }
  }

  if (r == start_[lv]) {
    begin_phase(ctx);
    return;
  }
  if (lv < k_) {
    if (r == end_[lv]) finish_phase(ctx);
    return;
  }
  if (!colour_reduction) return;
  if (st.role == 2) {
    if (st.final_mask == (1u << st.nports) - 1) pick_free_colour(ctx);
    return;
  }
  const Round t = r - start_[lv];
  if (t < static_cast<Round>(cv_iterations_)) {
    cv_step(ctx, static_cast<int>(t));
  } else if (st.cv >= 3 && r == start_[lv] + static_cast<Round>(cv_iterations_) + (5 - st.cv)) {
    pick_free_colour(ctx);
  }
}

void GenericCore::start(Context& ctx) {
  const NodeId v = ctx.node();
  const int lv = levels_.level[v];
  Msg hello;
  hello.kind = kHello;
  hello.level = static_cast<std::uint8_t>(lv);
  hello.flags = 1;
  hello.id = tree_.id(v);
  hello.label = kUndecided;
  if (lv < 1 || lv > k_ + 1 || !in_mask(active_, v)) throw Error("node " + std::to_string(v) + " has no level");
  if (lv == k_ + 1) {
    state_[v].label = code(Color::E);
    hello.label = code(Color::E);
    ctx.broadcast(hello);
    ctx.terminate();
    return;
  }
  if (k_ == 1 && ctx.degree() == 0) {
    state_[v].label = code(variant_ == Variant::TwoHalf ? Color::W : Color::R);
    ctx.terminate();
    return;
  }
  ctx.broadcast(hello);
  ctx.wake_at(start_[lv]);
}

void GenericCore::begin_phase(Context& ctx) {
  const NodeId v = ctx.node();
  NodeState& st = state_[v];
  const int lv = levels_.level[v];
  st.nports = 0;
  for (std::size_t p = 0; p < ctx.degree(); ++p) {
    const std::size_t s = tree_.slot(v, p);
    if (!nbr_active_[s] || nbr_level_[s] != lv || nbr_label_[s] != kUndecided) continue;
    if (st.nports == 2) throw Error("node " + std::to_string(v) + " has three undecided neighbours on its level");
    st.port[st.nports++] = static_cast<std::uint32_t>(p);
  }

  if (lv == k_ && variant_ == Variant::ThreeHalf) {
    if (st.nports == 0) {
      decide(ctx, Color::R, true, 0);
      return;
    }
    const std::uint64_t own = tree_.id(v);
    int higher = 0;
    st.parent_side = -1;
    for (int i = 0; i < st.nports; ++i)
      if (nbr_id_[tree_.slot(v, st.port[i])] > own) {
        ++higher;
        st.parent_side = static_cast<std::int8_t>(i);
      }
    if (higher == 2) {
      st.role = 2;
      return;
    }
    st.role = 1;
    cv_step(ctx, 0);
    return;
  }

  for (int i = 0; i < 2; ++i) {
    if (i < st.nports) continue;
    st.dist[i] = 0;
    st.end_id[i] = tree_.id(v);
  }
  if (st.nports == 1) {
    Msg m;
    m.kind = kToken;
    m.id = tree_.id(v);
    m.value = 1;
    ctx.send(st.port[0], m);
  }
  if (lv < k_) {
    ctx.wake_at(end_[lv]);
  } else if (st.nports == 0) {
    decide_path_colour(ctx);
  }
}

void GenericCore::on_token(Context& ctx, std::size_t port, const Msg& m) {
  const NodeId v = ctx.node();
  NodeState& st = state_[v];
  const int lv = levels_.level[v];
  const int side = side_of(v, port);
  st.dist[side] = m.value;
  st.end_id[side] = m.id;
  if (st.nports == 2) {
    const bool forward = lv == k_ || static_cast<std::uint64_t>(m.value) + 1 <= gammas_[lv - 1];
    if (forward) {
      Msg f = m;
      f.value = m.value + 1;
      ctx.send(st.port[1 - side], f);
    }
  }
  if (lv == k_ && st.dist[0] != kUnknown && st.dist[1] != kUnknown) decide_path_colour(ctx);
}

void GenericCore::decide_path_colour(Context& ctx) {
  const NodeState& st = state_[ctx.node()];
  const std::uint32_t d = st.end_id[0] < st.end_id[1] ? st.dist[0] : st.dist[1];
  decide(ctx, d % 2 == 0 ? Color::W : Color::B, false);
}

void GenericCore::finish_phase(Context& ctx) {
  const NodeState& st = state_[ctx.node()];
  const int lv = levels_.level[ctx.node()];
  const bool known = st.dist[0] != kUnknown && st.dist[1] != kUnknown;
  if (known && static_cast<std::uint64_t>(st.dist[0]) + st.dist[1] + 1 < gammas_[lv - 1])
    decide_path_colour(ctx);
  else
    decide(ctx, Color::D, false);
}

void GenericCore::cv_step(Context& ctx, int t) {
  const NodeId v = ctx.node();
  NodeState& st = state_[v];
  const std::uint64_t c = t == 0 ? tree_.id(v) : st.cv;
  std::uint64_t next;
  if (st.parent_side >= 0) {
    const std::uint64_t pc =
        t == 0 ? nbr_id_[tree_.slot(v, st.port[st.parent_side])] : st.nbr_cv[st.parent_side];
    const int i = std::countr_zero(c ^ pc);
    next = 2 * static_cast<std::uint64_t>(i) + ((c >> i) & 1);
  } else {
    next = c & 1;
  }
  st.cv = static_cast<std::uint32_t>(next);
  const bool last = t + 1 == cv_iterations_;
  if (last && st.cv <= 2) {
    decide(ctx, cv_color(st.cv), true, st.cv);
    return;
  }
  Msg m;
  m.kind = kColour;
  m.value = st.cv;
  for (int i = 0; i < st.nports; ++i) ctx.send(st.port[i], m);
  if (last)
    ctx.wake_at(ctx.round() + 1 + (5 - st.cv));
  else
    ctx.wake_at(ctx.round() + 1);
}

void GenericCore::pick_free_colour(Context& ctx) {
  NodeState& st = state_[ctx.node()];
  std::uint32_t c = 0;
  auto taken = [&](std::uint32_t x) {
    for (int i = 0; i < st.nports; ++i)
      if (st.nbr_cv[i] == x) return true;
    return false;
  };
  while (taken(c)) ++c;
  if (c > 2) throw Error("no free colour at node " + std::to_string(ctx.node()));
  st.cv = c;
  decide(ctx, cv_color(c), true, c);
}

}  // namespace detail

namespace {

using detail::GenericCore;

class GenericProgram {
 public:
  GenericProgram(GenericCore& core, const NodeMask& mask) : core_(core), mask_(mask) {}
  void step(Context& ctx) {
    if (!in_mask(mask_, ctx.node())) {
      ctx.terminate();
      return;
    }
    core_.step(ctx);
  }
  std::uint64_t output_fingerprint(NodeId v) const {
    return in_mask(mask_, v) && core_.decided(v) ? static_cast<std::uint64_t>(core_.color(v)) + 1 : 0;
  }

 private:
  GenericCore& core_;
  const NodeMask& mask_;
};

void require_path(const Tree& t) {
  if (t.max_degree() > 2) throw Error("input is not a path");
}

}  // namespace

std::vector<Color> two_color_path(const Tree& path) {
  require_path(path);
  const std::size_t n = path.size();
  std::vector<Color> out(n, Color::W);
  // Walk from the lower-id endpoint.
  std::vector<NodeId> ends;
  for (NodeId v = 0; v < n; ++v)
    if (path.degree(v) <= 1) ends.push_back(v);
  NodeId start = ends.front();
  for (NodeId e : ends)
    if (path.id(e) < path.id(start)) start = e;
  NodeId prev = start;
  NodeId cur = start;
  for (std::size_t i = 0; i < n; ++i) {
    out[cur] = i % 2 == 0 ? Color::W : Color::B;
    NodeId nxt = cur;
    for (NodeId u : path.neighbors(cur))
      if (u != prev) nxt = u;
    prev = cur;
    cur = nxt;
  }
  return out;
}

int cole_vishkin_iterations(std::uint64_t id_bound) {
  int t = 0;
  std::uint64_t maxc = std::max<std::uint64_t>(id_bound, 1);
  while (maxc > 5) {
    const int len = std::bit_width(maxc);
    maxc = 2 * static_cast<std::uint64_t>(len) - 1;
    ++t;
  }
  return std::max(t, 1);
}

PathColoring three_color_path(const Tree& path, std::uint64_t id_bound) {
  require_path(path);
  LevelMap levels = compute_levels(path, 1);
  GenericParams params;
  params.variant = Variant::ThreeHalf;
  params.id_bound = id_bound;
  GenericResult res = generic_khier(path, levels, params);
  return {std::move(res.colors), worst_case(res.trace)};
}

std::vector<Round> phase_starts(std::span<const std::uint64_t> gammas, int k) {
  std::vector<Round> s(k + 1, 0);
  if (k < 1) throw Error("k must be positive");
  s[1] = 1;
  for (int i = 1; i < k; ++i) s[i + 1] = s[i] + static_cast<Round>(2 * gammas[i - 1]) + static_cast<Round>(k) + 1;
  return s;
}

GenericResult generic_khier(const Tree& tree, const LevelMap& levels, const GenericParams& params,
                            const NodeMask& mask) {
  GenericCore core(tree, levels, mask, params.variant, params.gammas, params.id_bound);
  GenericProgram program(core, mask);
  GenericResult res;
  res.trace = run(tree, program, core.round_budget());
  res.colors.assign(tree.size(), Color::W);
  for (NodeId v = 0; v < tree.size(); ++v)
    if (in_mask(mask, v)) res.colors[v] = core.color(v);
  res.phase_start = core.starts();
  res.phases = shrink_stats(res.trace, levels, params.gammas, res.phase_start, mask);
  for (const auto& p : res.phases) res.shrink_violations += p.ok ? 0 : 1;
  return res;
}

std::vector<std::uint64_t> gammas_poly(std::uint64_t n, std::span<const double> alphas) {
  std::vector<std::uint64_t> out;
  for (double a : alphas) {
    const double g = std::ceil(std::pow(static_cast<double>(n), a) - 1e-9);
    out.push_back(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(g)));
  }
  return out;
}

std::vector<std::uint64_t> gammas_logstar(std::uint64_t n, int k) {
  if (k < 1) throw Error("k must be positive");
  const double t = std::pow(static_cast<double>(iterated_log(static_cast<double>(n))), 1.0 / std::pow(2.0, k - 1));
  std::vector<std::uint64_t> out;
  for (int i = 1; i < k; ++i) {
    const double g = std::ceil(std::pow(t, std::pow(2.0, i - 1)) - 1e-9);
    out.push_back(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(g)));
  }
  return out;
}

std::vector<PhaseStats> shrink_stats(const RunTrace& trace, const LevelMap& levels, std::span<const std::uint64_t> gammas,
                                     std::span<const Round> starts, const NodeMask& mask) {
  const int k = levels.k;
  std::vector<PhaseStats> out;
  for (int i = 1; i < k; ++i) {
    PhaseStats ps;
    ps.phase = i;
    ps.start = starts[i];
    for (NodeId v = 0; v < trace.termination_round.size(); ++v) {
      if (!in_mask(mask, v) || levels.level[v] > k) continue;
      const Round t = trace.termination_round[v];
      if (t >= starts[i]) ++ps.before;
      if (t >= starts[i + 1]) ++ps.after;
    }
    ps.bound = 2.0 * (1.0 + std::pow(2.0, k)) * static_cast<double>(ps.before) / static_cast<double>(gammas[i - 1]);
    ps.ok = static_cast<double>(ps.after) <= ps.bound;
    out.push_back(ps);
  }
  return out;
}

}  // namespace lcl
