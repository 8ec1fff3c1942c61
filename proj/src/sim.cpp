#include "lcl/sim.hpp"

#include <algorithm>
#include <numeric>

namespace lcl {

Engine::Engine(const Tree& tree, Round max_rounds)
    : tree_(tree),
      max_rounds_(max_rounds),
      alive_(tree.size()),
      inbox_(tree.slot_count()),
      inbox_round_(tree.slot_count(), 0),
      sent_round_(tree.slot_count(), 0),
      stepped_(tree.size(), 0),
      done_(tree.size(), 0) {
  trace_.termination_round.assign(tree.size(), 0);
}

void Engine::schedule(NodeId v, Round r) { wakeups_[r].push_back(v); }

void Engine::begin_round(Round r) {
  current_ = r;
  if (r == 0) return;
  current_nodes_.clear();
  auto it = wakeups_.find(r);
  if (it == wakeups_.end()) return;
  for (NodeId v : it->second) {
    if (stepped_[v] == r + 1 || done_[v]) continue;
    stepped_[v] = r + 1;
    current_nodes_.push_back(v);
  }
  wakeups_.erase(it);
}

void Engine::deliver() {
  const Round next = current_ + 1;
  for (const Outgoing& o : outbox_) {
    if (done_[o.dst]) {
      ++trace_.messages_dropped;
      continue;
    }
    inbox_[o.slot] = o.msg;
    inbox_round_[o.slot] = next + 1;
    schedule(o.dst, next);
  }
  outbox_.clear();
}

const Msg* Context::received(std::size_t port) const {
  if (port >= degree()) throw Error("port out of range");
  const std::size_t s = e_.tree_.slot(v_, port);
  return e_.inbox_round_[s] == r_ + 1 ? &e_.inbox_[s] : nullptr;
}

void Context::send(std::size_t port, const Msg& m) {
  if (port >= degree()) throw Error("port out of range");
  const std::size_t s = e_.tree_.slot(v_, port);
  if (e_.sent_round_[s] == r_ + 1)
    throw Error("node " + std::to_string(v_) + " sent twice on port " + std::to_string(port) + " in round " +
                std::to_string(r_));
  e_.sent_round_[s] = r_ + 1;
  e_.outbox_.push_back({e_.tree_.reverse_slot(s), e_.tree_.slot_target(s), m});
  ++e_.trace_.messages_sent;
  e_.trace_.message_bytes += sizeof(Msg);
}

void Context::broadcast(const Msg& m) {
  for (std::size_t p = 0; p < degree(); ++p) send(p, m);
}

void Context::wake_at(Round r) {
  if (r <= r_) throw Error("wake_at must name a future round");
  e_.schedule(v_, r);
}

void Context::terminate() {
  if (e_.done_[v_]) throw Error("node " + std::to_string(v_) + " terminated twice");
  e_.done_[v_] = 1;
  --e_.alive_;
  e_.trace_.termination_round[v_] = r_;
}

Rational node_averaged(const RunTrace& trace) {
  if (trace.termination_round.empty()) return {};
  const std::uint64_t total = total_rounds(trace);
  const std::uint64_t n = trace.termination_round.size();
  const std::uint64_t g = std::gcd(total, n);
  return {total / g, n / g};
}

Round worst_case(const RunTrace& trace) {
  Round w = 0;
  for (Round r : trace.termination_round) w = std::max(w, r);
  return w;
}

std::uint64_t total_rounds(const RunTrace& trace) {
  std::uint64_t t = 0;
  for (Round r : trace.termination_round) t += r;
  return t;
}

void write_trace_csv(std::ostream& out, const Tree& tree, const LevelMap* levels, const RunTrace& trace) {
  if (trace.termination_round.size() != tree.size()) throw Error("trace size does not match tree");
  out << "node_id,level,input,termination_round\n";
  for (NodeId v = 0; v < tree.size(); ++v) {
    out << tree.id(v) << ',' << (levels ? static_cast<int>(levels->level[v]) : 0) << ','
        << (tree.input(v) == InputLabel::Active ? "Active" : "Weight") << ',' << trace.termination_round[v] << '\n';
  }
}

nlohmann::json trace_summary(const RunTrace& trace) {
  const Rational avg = node_averaged(trace);
  return {{"n", trace.termination_round.size()},
          {"avg", avg.value()},
          {"avg_num", avg.num},
          {"avg_den", avg.den},
          {"worst", worst_case(trace)},
          {"total", total_rounds(trace)},
          {"rounds_executed", trace.rounds_executed},
          {"messages_sent", trace.messages_sent}};
}

}  // namespace lcl
