#include <algorithm>
#include <cmath>
#include <string>

#include "generic_core.hpp"

namespace lcl {

std::uint64_t decomposition_gamma(std::uint64_t n, int k, std::uint64_t ell) {
  if (k < 1) throw Error("k must be positive");
  const double kk = static_cast<double>(k);
  const double g = std::pow(static_cast<double>(n), 1.0 / kk) * std::pow(static_cast<double>(ell) / 2.0, 1.0 - 1.0 / kk);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(g - 1e-9)));
}

Decomposition rake_compress(const Tree& tree, std::uint64_t gamma, std::uint64_t ell, int max_layers,
                            const NodeMask& mask) {
  if (gamma < 1) throw Error("gamma must be positive");
  if (ell < 1) throw Error("ell must be positive");
  const std::size_t n = tree.size();
  Decomposition dec;
  dec.gamma = gamma;
  dec.ell = std::max<std::uint64_t>(ell, 2);
  dec.compress.assign(n, 0);
  dec.layer.assign(n, 0);
  dec.sublayer.assign(n, 0);
  dec.ready.assign(n, 0);
  const std::uint64_t L = dec.ell;

  std::vector<std::uint8_t> alive(n, 0);
  std::vector<std::uint32_t> deg(n, 0);
  std::vector<NodeId> remaining;
  for (NodeId v = 0; v < n; ++v) {
    if (!in_mask(mask, v)) continue;
    alive[v] = 1;
    remaining.push_back(v);
  }
  std::vector<NodeId> cand;
  for (NodeId v : remaining) {
    for (NodeId u : tree.neighbors(v)) deg[v] += alive[u];
    if (deg[v] <= 1) cand.push_back(v);
  }

  auto remove = [&](NodeId v, std::vector<NodeId>& next) {
    alive[v] = 0;
    for (NodeId u : tree.neighbors(v)) {
      if (!alive[u]) continue;
      if (--deg[u] == 1 || deg[u] == 0) next.push_back(u);
    }
  };
  auto alive_neighbor = [&](NodeId v, NodeId skip) {
    for (NodeId u : tree.neighbors(v))
      if (alive[u] && u != skip) return u;
    return v;
  };

  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t stamp_now = 0;
  std::vector<NodeId> batch, next;
  std::size_t left = remaining.size();
  Round base = 0;
  int layer = 0;
  while (left > 0) {
    if (++layer > max_layers)
      throw Error("decomposition needs more than " + std::to_string(max_layers) + " layers (gamma=" +
                  std::to_string(gamma) + ", ell=" + std::to_string(ell) + ")");
    for (std::uint64_t j = 1; j <= gamma && left > 0; ++j) {
      ++stamp_now;
      batch.clear();
      for (NodeId v : cand) {
        if (!alive[v] || deg[v] > 1 || stamp[v] == stamp_now) continue;
        stamp[v] = stamp_now;
        batch.push_back(v);
      }
      next.clear();
      std::vector<NodeId> keep;
      for (NodeId v : batch) {
        if (deg[v] == 1) {
          // Isolated edge: only the lower id leaves in this step.
          const NodeId u = alive_neighbor(v, v);
          if (deg[u] == 1 && stamp[u] == stamp_now && tree.id(u) < tree.id(v)) {
            keep.push_back(v);
            continue;
          }
        }
        dec.layer[v] = static_cast<std::uint16_t>(layer);
        dec.sublayer[v] = static_cast<std::uint32_t>(j);
        dec.ready[v] = base + static_cast<Round>(j);
      }
      for (NodeId v : batch)
        if (dec.layer[v] == layer && dec.sublayer[v] == j) {
          remove(v, next);
          --left;
        }
      for (NodeId v : keep) next.push_back(v);
      cand.swap(next);
    }
    if (left == 0) break;

    // Compress maximal chains of degree-2 nodes with at least L nodes.
    const Round compress_ready = base + static_cast<Round>(gamma + 2 * L);
    std::size_t keep_n = 0;
    for (NodeId v : remaining)
      if (alive[v]) remaining[keep_n++] = v;
    remaining.resize(keep_n);
    ++stamp_now;
    std::vector<NodeId> chain, back;
    next.clear();
    std::vector<NodeId> pieces;
    for (NodeId s : remaining) {
      if (deg[s] != 2 || stamp[s] == stamp_now) continue;
      stamp[s] = stamp_now;
      chain.assign(1, s);
      back.clear();
      // Walk both directions from s.
      for (int dir = 0; dir < 2; ++dir) {
        std::vector<NodeId>& out = dir == 0 ? chain : back;
        NodeId prev = s;
        NodeId cur = dir == 0 ? alive_neighbor(s, s) : alive_neighbor(s, alive_neighbor(s, s));
        while (deg[cur] == 2 && stamp[cur] != stamp_now) {
          stamp[cur] = stamp_now;
          out.push_back(cur);
          const NodeId nxt = alive_neighbor(cur, prev);
          prev = cur;
          cur = nxt;
        }
      }
      std::reverse(back.begin(), back.end());
      back.insert(back.end(), chain.begin(), chain.end());
      chain.swap(back);
      const std::uint64_t m = chain.size();
      if (m < L) continue;
      if (tree.id(chain.front()) > tree.id(chain.back())) std::reverse(chain.begin(), chain.end());
      const std::uint64_t r = (m + 1 + 2 * L) / (2 * L + 1);  // ceil((m+1)/(2L+1))
      const std::uint64_t P = m - (r - 1);
      std::size_t pos = 0;
      for (std::uint64_t q = 0; q < r; ++q) {
        const std::uint64_t len = P / r + (q < P % r ? 1 : 0);
        for (std::uint64_t t = 0; t < len; ++t) pieces.push_back(chain[pos++]);
        ++pos;  // splitter, raked in the next layer
      }
    }
    for (NodeId v : pieces) {
      dec.compress[v] = 1;
      dec.layer[v] = static_cast<std::uint16_t>(layer);
      dec.ready[v] = compress_ready;
    }
    for (NodeId v : pieces) {
      remove(v, next);
      --left;
    }
    for (NodeId v : next) cand.push_back(v);
    base = compress_ready;
  }
  dec.layers = layer;
  for (NodeId v = 0; v < n; ++v) dec.rounds = std::max(dec.rounds, dec.ready[v]);
  return dec;
}

std::vector<std::string> validate_decomposition(const Tree& tree, const Decomposition& dec, const NodeMask& mask) {
  std::vector<std::string> problems;
  const std::size_t n = tree.size();
  auto node = [&](NodeId v) { return "node " + std::to_string(v); };
  for (NodeId v = 0; v < n; ++v) {
    if (!in_mask(mask, v)) continue;
    if (dec.layer[v] == 0) {
      problems.push_back(node(v) + " has no layer");
      return problems;
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!in_mask(mask, v)) continue;
    int higher = 0;
    for (NodeId u : tree.neighbors(v)) {
      if (!in_mask(mask, u)) continue;
      if (dec.rank(u) > dec.rank(v)) ++higher;
      if (dec.rank(u) == dec.rank(v) && !dec.compress[v])
        problems.push_back(node(v) + " shares rake sublayer with neighbour " + std::to_string(u));
    }
    if (higher > 1) problems.push_back(node(v) + " has " + std::to_string(higher) + " higher neighbours");
  }

  std::vector<std::uint8_t> seen(n, 0);
  std::vector<NodeId> comp, queue;
  std::vector<std::uint32_t> dist(n, 0);
  auto same = [&](NodeId a, NodeId b) {
    return in_mask(mask, b) && dec.layer[a] == dec.layer[b] && dec.compress[a] == dec.compress[b];
  };
  auto farthest = [&](NodeId src, std::uint32_t& d_out) {
    queue.assign(1, src);
    dist[src] = 0;
    std::vector<NodeId> touched{src};
    std::vector<std::uint8_t>& mark = seen;  // reuse: 2 = visited in this BFS
    mark[src] = 2;
    NodeId far = src;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const NodeId v = queue[i];
      if (dist[v] > dist[far]) far = v;
      for (NodeId u : tree.neighbors(v))
        if (same(v, u) && mark[u] != 2) {
          mark[u] = 2;
          dist[u] = dist[v] + 1;
          queue.push_back(u);
          touched.push_back(u);
        }
    }
    for (NodeId v : touched) mark[v] = 1;
    d_out = dist[far];
    return far;
  };

  for (NodeId s = 0; s < n; ++s) {
    if (!in_mask(mask, s) || seen[s]) continue;
    comp.assign(1, s);
    seen[s] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (NodeId u : tree.neighbors(comp[i]))
        if (same(comp[i], u) && !seen[u]) {
          seen[u] = 1;
          comp.push_back(u);
        }
    const std::string where = (dec.compress[s] ? "compress" : "rake") + std::string(" component of layer ") +
                              std::to_string(dec.layer[s]) + " at " + node(s);
    if (dec.compress[s]) {
      if (comp.size() < dec.ell || comp.size() > 2 * dec.ell)
        problems.push_back(where + " has " + std::to_string(comp.size()) + " nodes");
      for (NodeId v : comp) {
        int inner = 0, higher = 0;
        for (NodeId u : tree.neighbors(v)) {
          if (!in_mask(mask, u)) continue;
          if (same(v, u)) ++inner;
          else if (dec.rank(u) > dec.rank(v)) ++higher;
        }
        if (inner > 2) problems.push_back(where + " is not a path");
        if (inner <= 1 && higher != 1) problems.push_back(where + ": endpoint " + node(v) + " has " + std::to_string(higher) + " higher neighbours");
        if (inner == 2 && higher != 0) problems.push_back(where + ": interior " + node(v) + " has a higher neighbour");
      }
    } else {
      std::size_t exits = 0;
      for (NodeId v : comp)
        for (NodeId u : tree.neighbors(v))
          if (in_mask(mask, u) && !same(v, u) && dec.rank(u) > dec.rank(v)) ++exits;
      if (exits > 1) problems.push_back(where + " has " + std::to_string(exits) + " edges to higher layers");
      std::uint32_t d1 = 0, d2 = 0;
      const NodeId a = farthest(s, d1);
      farthest(a, d2);
      if (d2 > 2 * dec.gamma) problems.push_back(where + " has diameter " + std::to_string(d2));
    }
  }
  return problems;
}

namespace {

// Tags and orientations of the labeling induced by a decomposition.
void label_from_decomposition(const Tree& tree, const Decomposition& dec, const NodeMask& mask, Labeling& out) {
  const std::size_t n = tree.size();
  out.nodes.resize(n);
  out.orient.assign(tree.slot_count(), Orient::None);
  auto orient = [&](NodeId v, std::size_t p) {
    const std::size_t s = tree.slot(v, p);
    out.orient[s] = Orient::Out;
    out.orient[tree.reverse_slot(s)] = Orient::In;
  };
  auto compress_nbrs = [&](NodeId v) {
    int c = 0;
    for (NodeId u : tree.neighbors(v))
      if (in_mask(mask, u) && dec.compress[u] && dec.layer[u] == dec.layer[v]) ++c;
    return c;
  };
  for (NodeId v = 0; v < n; ++v) {
    if (!in_mask(mask, v)) continue;
    const auto i = static_cast<std::uint8_t>(dec.layer[v]);
    const bool endpoint = dec.compress[v] && compress_nbrs(v) <= 1;
    if (!dec.compress[v]) out.nodes[v].tag = {false, i};
    else if (endpoint) out.nodes[v].tag = {false, static_cast<std::uint8_t>(i + 1)};
    else out.nodes[v].tag = {true, i};
    auto nb = tree.neighbors(v);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      const NodeId u = nb[p];
      if (!in_mask(mask, u)) continue;
      if (dec.compress[v] && !endpoint) {
        // Interior nodes point at an adjacent endpoint of their own piece.
        if (dec.compress[u] && dec.layer[u] == dec.layer[v] && compress_nbrs(u) <= 1) orient(v, p);
      } else if (dec.rank(u) > dec.rank(v)) {
        orient(v, p);
      }
    }
  }
}

}  // namespace

HierResult hier_labeling_solve(const Tree& tree, int k, const NodeMask& mask, std::uint64_t gamma) {
  if (k < 1) throw Error("k must be positive");
  std::uint64_t members = 0;
  for (NodeId v = 0; v < tree.size(); ++v) members += in_mask(mask, v) ? 1 : 0;
  HierResult res;
  res.dec = rake_compress(tree, gamma ? gamma : decomposition_gamma(members, k, 4), 4, k, mask);
  label_from_decomposition(tree, res.dec, mask, res.labels);
  std::vector<Round> finish(tree.size(), 0);
  for (NodeId v = 0; v < tree.size(); ++v)
    if (in_mask(mask, v)) finish[v] = res.dec.ready[v] + 1;
  ScheduleProgram program(finish);
  res.trace = run(tree, program, res.dec.rounds + 2);
  return res;
}

namespace {

using detail::GenericCore;

class WaugProgram {
 public:
  WaugProgram(const Tree& tree, GenericCore& core, const NodeMask& active, const Decomposition& dec,
              const Labeling& labels)
      : tree_(tree),
        core_(core),
        active_(active),
        dec_(dec),
        labels_(labels),
        secondary_(tree.size(), Secondary::None),
        incoming_(tree.size(), detail::kUndecided) {}

  void step(Context& ctx) {
    const NodeId v = ctx.node();
    if (active_[v]) {
      core_.step(ctx);
      return;
    }
    core_.absorb(ctx);
    for (std::size_t p = 0; p < ctx.degree(); ++p) {
      const Msg* m = ctx.received(p);
      if (m && m->kind == detail::kSecondary) incoming_[v] = m->label;
    }
    const Round go = dec_.ready[v] + 1;
    if (ctx.round() < go) {
      if (ctx.round() == 0) ctx.wake_at(go);
      return;
    }
    const Secondary s = resolve(v);
    if (s == Secondary::None) return;
    secondary_[v] = s;
    Msg m;
    m.kind = detail::kSecondary;
    m.label = static_cast<std::uint8_t>(s);
    auto nb = tree_.neighbors(v);
    for (std::size_t p = 0; p < nb.size(); ++p)
      if (!active_[nb[p]] && labels_.orient[tree_.slot(v, p)] == Orient::In) ctx.send(p, m);
    ctx.terminate();
  }

  Secondary secondary(NodeId v) const { return secondary_[v]; }

  std::uint64_t output_fingerprint(NodeId v) const {
    if (active_[v]) return core_.decided(v) ? static_cast<std::uint64_t>(core_.color(v)) + 1 : 0;
    return static_cast<std::uint64_t>(secondary_[v]);
  }

 private:
  Secondary resolve(NodeId v) const {
    auto nb = tree_.neighbors(v);
    std::size_t target = tree_.slot_count();
    bool has_active = false;
    for (std::size_t p = 0; p < nb.size(); ++p) {
      const std::size_t s = tree_.slot(v, p);
      if (!active_[nb[p]]) continue;
      has_active = true;
      if (labels_.orient[s] == Orient::Out) target = s;
    }
    if (has_active) {
      const std::uint8_t l = core_.nbr_label(target);
      return l == detail::kUndecided ? Secondary::None : secondary_of(static_cast<Color>(l));
    }
    if (labels_.nodes[v].tag.compress) return Secondary::Decline;
    bool points = false;
    for (std::size_t p = 0; p < nb.size(); ++p)
      if (labels_.orient[tree_.slot(v, p)] == Orient::Out) points = true;
    if (!points) return Secondary::D;
    if (incoming_[v] == detail::kUndecided) return Secondary::None;
    const auto in = static_cast<Secondary>(incoming_[v]);
    return in == Secondary::Decline ? Secondary::D : in;
  }

  const Tree& tree_;
  GenericCore& core_;
  const NodeMask& active_;
  const Decomposition& dec_;
  const Labeling& labels_;
  std::vector<Secondary> secondary_;
  std::vector<std::uint8_t> incoming_;
};

}  // namespace

WaugResult weight_augmented_solve(const Tree& tree, int k, std::uint64_t n_known, std::uint64_t id_bound) {
  if (k < 2) throw Error("weight-augmented solver needs k >= 2");
  const std::uint64_t n = n_known ? n_known : tree.size();
  const NodeMask active = input_mask(tree, InputLabel::Active);
  const NodeMask weight = input_mask(tree, InputLabel::Weight);
  const LevelMap levels = compute_levels(tree, k, active);

  WaugResult res;
  for (int i = 1; i < k; ++i) {
    const double g = std::ceil(std::pow(static_cast<double>(n), static_cast<double>(i) / k) - 1e-9);
    res.gammas.push_back(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(g)));
  }
  std::uint64_t members = 0;
  for (auto w : weight) members += w;
  res.dec = rake_compress(tree, decomposition_gamma(std::max<std::uint64_t>(members, 1), k, 4), 4, k, weight);
  label_from_decomposition(tree, res.dec, weight, res.labels);

  // Weight nodes next to Active nodes point at the lowest-id one.
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (active[v]) continue;
    auto nb = tree.neighbors(v);
    std::size_t best = nb.size();
    for (std::size_t p = 0; p < nb.size(); ++p)
      if (active[nb[p]] && (best == nb.size() || tree.id(nb[p]) < tree.id(nb[best]))) best = p;
    if (best == nb.size()) continue;
    const std::size_t s = tree.slot(v, best);
    res.labels.orient[s] = Orient::Out;
    res.labels.orient[tree.reverse_slot(s)] = Orient::In;
  }

  GenericCore core(tree, levels, active, Variant::TwoHalf, res.gammas, id_bound);
  WaugProgram program(tree, core, active, res.dec, res.labels);
  const Round budget = std::max(core.round_budget(), res.dec.rounds) + static_cast<Round>(tree.size()) + 16;
  res.trace = run(tree, program, budget);
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (active[v]) res.labels.nodes[v].color = core.color(v);
    else res.labels.nodes[v].secondary = program.secondary(v);
  }
  res.phases = shrink_stats(res.trace, levels, res.gammas, core.starts(), active);
  for (const auto& p : res.phases) res.shrink_violations += p.ok ? 0 : 1;
  return res;
}

}  // namespace lcl
