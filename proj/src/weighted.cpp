#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "generic_core.hpp"
#include "lcl/generators.hpp"

namespace lcl {

namespace {

constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kInf - b ? kInf : a + b; }

// BFS region around a root inside the mask. Children of entry i occupy
// [child_begin[i], child_end[i]) since BFS appends them contiguously.
struct Region {
  std::vector<NodeId> node;
  std::vector<std::uint32_t> parent;  // index into node; root points to itself
  std::vector<std::uint32_t> depth;
  std::vector<std::uint32_t> child_begin, child_end;

  void build(const Tree& tree, NodeId root, std::uint32_t max_depth, const NodeMask& mask) {
    node.assign(1, root);
    parent.assign(1, 0);
    depth.assign(1, 0);
    child_begin.clear();
    child_end.clear();
    for (std::size_t i = 0; i < node.size(); ++i) {
      child_begin.push_back(static_cast<std::uint32_t>(node.size()));
      if (depth[i] < max_depth) {
        const NodeId v = node[i];
        const NodeId up = i == 0 ? v : node[parent[i]];
        for (NodeId u : tree.neighbors(v)) {
          if (u == up || !in_mask(mask, u)) continue;
          node.push_back(u);
          parent.push_back(static_cast<std::uint32_t>(i));
          depth.push_back(depth[i] + 1);
        }
      }
      child_end.push_back(static_cast<std::uint32_t>(node.size()));
    }
  }
};

// Exact DP on a region of depth cap+1: f = copies needed in the subtree when the node copies.
std::vector<NodeId> min_copies(const Tree& tree, NodeId root, int d, std::uint32_t cap, const NodeMask& mask,
                               Region& reg) {
  if (d < 0) throw Error("d must be non-negative");
  if (!in_mask(mask, root)) throw Error("root outside the mask");
  reg.build(tree, root, cap + 1, mask);
  const std::size_t m = reg.node.size();
  std::vector<std::uint64_t> f(m, kInf);
  std::vector<std::vector<std::uint32_t>> chosen(m);
  std::vector<std::uint32_t> kids;
  for (std::size_t i = m; i-- > 0;) {
    if (reg.depth[i] > cap) continue;
    kids.clear();
    for (std::uint32_t c = reg.child_begin[i]; c < reg.child_end[i]; ++c) kids.push_back(c);
    const std::size_t need = kids.size() > static_cast<std::size_t>(d) ? kids.size() - d : 0;
    std::partial_sort(kids.begin(), kids.begin() + static_cast<std::ptrdiff_t>(need), kids.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                        if (f[a] != f[b]) return f[a] < f[b];
                        return tree.id(reg.node[a]) < tree.id(reg.node[b]);
                      });
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < need; ++j) total = sat_add(total, f[kids[j]]);
    f[i] = total;
    chosen[i].assign(kids.begin(), kids.begin() + static_cast<std::ptrdiff_t>(need));
  }
  if (f[0] == kInf)
    throw Error("no Copy assignment around node " + std::to_string(root) + " within depth " + std::to_string(cap));
  std::vector<NodeId> out;
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const std::uint32_t i = stack.back();
    stack.pop_back();
    out.push_back(reg.node[i]);
    for (std::uint32_t c : chosen[i]) stack.push_back(c);
  }
  return out;
}

std::vector<NodeId> greedy_copies(const Tree& tree, NodeId root, int d, std::uint32_t cap, const NodeMask& mask,
                                  Region& reg) {
  if (!in_mask(mask, root)) throw Error("root outside the mask");
  reg.build(tree, root, std::numeric_limits<std::uint32_t>::max(), mask);
  const std::size_t m = reg.node.size();
  std::vector<std::uint64_t> size(m, 1);
  for (std::size_t i = m; i-- > 1;) size[reg.parent[i]] += size[i];
  std::vector<NodeId> out;
  std::vector<std::uint32_t> stack{0};
  std::vector<std::uint32_t> kids;
  while (!stack.empty()) {
    const std::uint32_t i = stack.back();
    stack.pop_back();
    if (reg.depth[i] > cap) throw Error("greedy assignment copies below the depth cap");
    out.push_back(reg.node[i]);
    kids.clear();
    for (std::uint32_t c = reg.child_begin[i]; c < reg.child_end[i]; ++c) kids.push_back(c);
    // Heaviest first; the first d decline.
    std::sort(kids.begin(), kids.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (size[a] != size[b]) return size[a] > size[b];
      return tree.id(reg.node[a]) > tree.id(reg.node[b]);
    });
    for (std::size_t j = static_cast<std::size_t>(d); j < kids.size(); ++j) stack.push_back(kids[j]);
  }
  return out;
}

MinCopyResult to_result(const Tree& tree, const std::vector<NodeId>& copies) {
  MinCopyResult r;
  r.copy.assign(tree.size(), 0);
  for (NodeId v : copies) r.copy[v] = 1;
  r.count = copies.size();
  return r;
}

}  // namespace

MinCopyResult min_copy_assignment(const Tree& tree, NodeId root, int d, std::uint32_t depth_cap,
                                  const NodeMask& mask) {
  Region reg;
  return to_result(tree, min_copies(tree, root, d, depth_cap, mask, reg));
}

MinCopyResult greedy_copy_assignment(const Tree& tree, NodeId root, int d, std::uint32_t depth_cap,
                                     const NodeMask& mask) {
  Region reg;
  return to_result(tree, greedy_copies(tree, root, d, depth_cap, mask, reg));
}

std::uint32_t log_ceil(std::uint64_t n, int d) {
  if (d < 1) throw Error("d must be at least 1");
  std::uint32_t c = 0;
  std::uint64_t p = 1;
  while (p < n) {
    p = p > kInf / static_cast<std::uint64_t>(d + 1) ? kInf : p * static_cast<std::uint64_t>(d + 1);
    ++c;
  }
  return c;
}

DfreeResult dfree_algorithm_A(const Tree& tree, std::span<const DfreeInput> inputs, int d, std::uint64_t n, double x,
                              const NodeMask& mask) {
  const std::size_t sz = tree.size();
  if (inputs.size() != sz) throw Error("dfree inputs do not match tree");
  DfreeResult res;
  res.c = log_ceil(n, d);
  res.rounds = 3 * res.c + 3;
  res.choices.assign(sz, WeightChoice::Decline);
  const std::uint64_t threshold = 2 * static_cast<std::uint64_t>(res.c) + 2;

  // Nearest A node per direction: down[] inside the rooted subtree, up[] through the parent.
  std::vector<std::uint8_t> seen(sz, 0);
  std::vector<NodeId> order;
  std::vector<NodeId> parent(sz, 0);
  std::vector<std::uint64_t> down(sz, kInf), up(sz, kInf);
  auto self = [&](NodeId v) -> std::uint64_t { return inputs[v] == DfreeInput::A ? 0 : kInf; };
  for (NodeId r = 0; r < sz; ++r) {
    if (!in_mask(mask, r) || seen[r]) continue;
    order.assign(1, r);
    seen[r] = 1;
    parent[r] = r;
    for (std::size_t i = 0; i < order.size(); ++i)
      for (NodeId u : tree.neighbors(order[i]))
        if (in_mask(mask, u) && !seen[u]) {
          seen[u] = 1;
          parent[u] = order[i];
          order.push_back(u);
        }
    for (std::size_t i = order.size(); i-- > 0;) {
      const NodeId v = order[i];
      std::uint64_t best = self(v);
      for (NodeId u : tree.neighbors(v))
        if (in_mask(mask, u) && u != parent[v] && parent[u] == v) best = std::min(best, sat_add(down[u], 1));
      down[v] = best;
    }
    up[r] = kInf;
    for (NodeId v : order) {
      // Best two child directions plus the parent direction and v itself.
      std::uint64_t b1 = std::min(self(v), up[v]), b2 = kInf;
      NodeId b1_child = v;
      for (NodeId u : tree.neighbors(v)) {
        if (!in_mask(mask, u) || u == parent[v] || parent[u] != v) continue;
        const std::uint64_t val = sat_add(down[u], 1);
        if (val < b1) {
          b2 = b1;
          b1 = val;
          b1_child = u;
        } else if (val < b2) {
          b2 = val;
        }
      }
      for (NodeId u : tree.neighbors(v)) {
        if (!in_mask(mask, u) || u == parent[v] || parent[u] != v) continue;
        up[u] = sat_add(u == b1_child ? b2 : b1, 1);
      }
      // Connect: two distinct directions (v itself counts as one) within the threshold.
      std::uint64_t c1 = self(v), c2 = kInf;
      auto push = [&](std::uint64_t val) {
        if (val < c1) {
          c2 = c1;
          c1 = val;
        } else if (val < c2) {
          c2 = val;
        }
      };
      push(up[v]);
      for (NodeId u : tree.neighbors(v))
        if (in_mask(mask, u) && u != parent[v] && parent[u] == v) push(sat_add(down[u], 1));
      if (c2 != kInf && c1 + c2 <= threshold) res.choices[v] = WeightChoice::Connect;
    }
  }

  Region reg;
  for (NodeId v = 0; v < sz; ++v) {
    if (!in_mask(mask, v) || inputs[v] != DfreeInput::A || res.choices[v] == WeightChoice::Connect) continue;
    const std::vector<NodeId> copies = min_copies(tree, v, d, res.c, mask, reg);
    for (NodeId u : copies) {
      if (res.choices[u] != WeightChoice::Decline) throw Error("Copy regions of two seeds overlap");
      res.choices[u] = WeightChoice::Copy;
    }
    SeedRecord rec;
    rec.node = v;
    rec.copies = copies.size();
    reg.build(tree, v, res.c, mask);
    rec.ball_size = reg.node.size();
    rec.greedy_copies = greedy_copies(tree, v, d, res.c, mask, reg).size();
    rec.bound = 6.0 * std::pow(static_cast<double>(rec.ball_size), x);
    rec.ok = static_cast<double>(rec.copies) <= rec.bound && rec.copies <= rec.greedy_copies;
    if (!rec.ok) ++res.copy_bound_violations;
    res.seeds.push_back(rec);
  }
  return res;
}

namespace {

using detail::GenericCore;

class APolyProgram {
 public:
  APolyProgram(const Tree& tree, GenericCore& core, const NodeMask& active, const DfreeResult& weight,
               std::span<const DfreeInput> inputs)
      : tree_(tree),
        core_(core),
        active_(active),
        weight_(weight),
        inputs_(inputs),
        secondary_(tree.size(), detail::kUndecided) {}

  void step(Context& ctx) {
    const NodeId v = ctx.node();
    if (active_[v]) {
      core_.step(ctx);
      return;
    }
    core_.absorb(ctx);
    const Round r = ctx.round();
    const Round ra = weight_.rounds;
    const WeightChoice ch = weight_.choices[v];
    if (ch != WeightChoice::Copy) {
      if (r >= ra) ctx.terminate();
      else if (r == 0) ctx.wake_at(ra);
      return;
    }
    if (inputs_[v] == DfreeInput::A) {
      if (r < ra) {
        if (r == 0) ctx.wake_at(ra);
        return;
      }
      // Copy the lowest-id Active neighbour once it has decided.
      std::size_t best = tree_.slot_count();
      for (std::size_t p = 0; p < ctx.degree(); ++p) {
        const std::size_t s = tree_.slot(v, p);
        if (!core_.nbr_active(s)) continue;
        if (best == tree_.slot_count() || core_.nbr_id(s) < core_.nbr_id(best)) best = s;
      }
      if (best == tree_.slot_count()) throw Error("seed " + std::to_string(v) + " has no Active neighbour");
      if (core_.nbr_label(best) == detail::kUndecided) return;
      adopt(ctx, core_.nbr_label(best), ctx.degree());
      return;
    }
    for (std::size_t p = 0; p < ctx.degree(); ++p) {
      const Msg* m = ctx.received(p);
      if (m && m->kind == detail::kCopyLabel) {
        adopt(ctx, m->label, p);
        return;
      }
    }
  }

  std::uint64_t output_fingerprint(NodeId v) const {
    if (active_[v]) return core_.decided(v) ? static_cast<std::uint64_t>(core_.color(v)) + 1 : 0;
    return static_cast<std::uint64_t>(weight_.choices[v]) * 256 + secondary_[v];
  }

  std::uint8_t secondary(NodeId v) const { return secondary_[v]; }

 private:
  void adopt(Context& ctx, std::uint8_t label, std::size_t from) {
    const NodeId v = ctx.node();
    secondary_[v] = label;
    Msg m;
    m.kind = detail::kCopyLabel;
    m.label = label;
    for (std::size_t p = 0; p < ctx.degree(); ++p) {
      if (p == from || active_[tree_.neighbors(v)[p]]) continue;
      ctx.send(p, m);
    }
    ctx.terminate();
  }

  const Tree& tree_;
  GenericCore& core_;
  const NodeMask& active_;
  const DfreeResult& weight_;
  std::span<const DfreeInput> inputs_;
  std::vector<std::uint8_t> secondary_;
};

}  // namespace

APolyResult a_poly(const Tree& tree, int delta, int d, int k, const APolyOptions& options) {
  if (k < 1) throw Error("k must be positive");
  check_weighted_params(delta, d);
  const double x = x_factor(delta, d);
  if (tree.max_degree() > static_cast<std::size_t>(delta))
    throw Error("tree degree " + std::to_string(tree.max_degree()) + " exceeds delta " + std::to_string(delta));
  const std::uint64_t n = options.n_known ? options.n_known : tree.size();
  const NodeMask active = input_mask(tree, InputLabel::Active);
  const NodeMask weight = input_mask(tree, InputLabel::Weight);
  const LevelMap levels = compute_levels(tree, k, active);

  APolyResult res;
  const std::vector<double> alphas = alpha_seq_poly(x, k);
  res.gammas = gammas_poly(n, alphas);

  std::vector<DfreeInput> inputs(tree.size(), DfreeInput::W);
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (active[v]) continue;
    for (NodeId u : tree.neighbors(v))
      if (active[u]) inputs[v] = DfreeInput::A;
  }
  res.weight = dfree_algorithm_A(tree, inputs, d, n, x, weight);

  GenericCore core(tree, levels, active, options.variant, res.gammas, options.id_bound);
  APolyProgram program(tree, core, active, res.weight, inputs);
  const Round budget = std::max(core.round_budget(), res.weight.rounds) + static_cast<Round>(tree.size()) + 16;
  res.trace = run(tree, program, budget);

  res.labels.nodes.assign(tree.size(), NodeOutput{});
  for (NodeId v = 0; v < tree.size(); ++v) {
    NodeOutput& o = res.labels.nodes[v];
    if (active[v]) {
      o.color = core.color(v);
    } else {
      o.choice = res.weight.choices[v];
      if (o.choice == WeightChoice::Copy) o.secondary = secondary_of(static_cast<Color>(program.secondary(v)));
    }
  }

  const std::vector<Round>& starts = core.starts();
  res.phases = shrink_stats(res.trace, levels, res.gammas, starts, active);
  for (const auto& p : res.phases) res.shrink_violations += p.ok ? 0 : 1;
  double prod = 1;
  for (int i = 1; i <= k; ++i) {
    UndecidedCheck u;
    u.phase = i;
    for (Round t : res.trace.termination_round) u.undecided += t >= starts[i] ? 1 : 0;
    u.bound = 7.0 * static_cast<double>(tree.size()) * std::pow(prod, x - 1.0);
    u.ok = static_cast<double>(u.undecided) <= u.bound;
    if (!u.ok) ++res.undecided_violations;
    res.undecided.push_back(u);
    if (i < k) prod *= static_cast<double>(res.gammas[i - 1]);
  }
  return res;
}

}  // namespace lcl
