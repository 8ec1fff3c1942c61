#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcl/labels.hpp"
#include "lcl/tree.hpp"

namespace lcl {

// Fixed-size message record. Programs give the fields their own meaning.
struct Msg {
  std::uint8_t kind = 0;
  std::uint8_t label = 0;
  std::uint8_t level = 0;
  std::uint8_t flags = 0;
  std::uint32_t value = 0;
  std::uint64_t id = 0;
};
static_assert(sizeof(Msg) == 16);

struct RunTrace {
  std::vector<Round> termination_round;
  Round rounds_executed = 0;  // last round in which some node was stepped
  std::uint64_t messages_sent = 0;
  std::uint64_t message_bytes = 0;
  std::uint64_t messages_dropped = 0;  // addressed to nodes that had already terminated
};

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

Rational node_averaged(const RunTrace& trace);
Round worst_case(const RunTrace& trace);
std::uint64_t total_rounds(const RunTrace& trace);

// CSV: node_id,level,input,termination_round. levels may be null (level column 0).
void write_trace_csv(std::ostream& out, const Tree& tree, const LevelMap* levels, const RunTrace& trace);
nlohmann::json trace_summary(const RunTrace& trace);

class Engine;

// What a node program sees while it is being stepped.
class Context {
 public:
  NodeId node() const { return v_; }
  Round round() const { return r_; }
  std::size_t degree() const;
  const Tree& tree() const;
  // Message that arrived on this port at the start of the current round, if any.
  const Msg* received(std::size_t port) const;
  void send(std::size_t port, const Msg& m);
  void broadcast(const Msg& m);
  // Step this node again at round r (> current round) even without messages.
  void wake_at(Round r);
  // Final output event: the node is never stepped again.
  void terminate();
  bool terminated() const;

 private:
  friend class Engine;
  Context(Engine& e, NodeId v, Round r) : e_(e), v_(v), r_(r) {}
  Engine& e_;
  NodeId v_;
  Round r_;
};

// Synchronous round engine. Round 0 steps every node; afterwards a node is
// stepped in round r iff a message arrived for it (sent in r-1) or it asked to
// be woken at r. Rounds in which nothing happens are skipped.
class Engine {
 public:
  Engine(const Tree& tree, Round max_rounds);

  template <class Program>
  RunTrace run(Program& program);

 private:
  friend class Context;

  void schedule(NodeId v, Round r);
  void deliver();
  void begin_round(Round r);
  bool done() const { return alive_ == 0; }

  const Tree& tree_;
  Round max_rounds_;
  Round current_ = 0;
  std::size_t alive_;
  std::vector<Msg> inbox_;
  std::vector<Round> inbox_round_;  // round + 1 in which inbox_[slot] is readable; 0 = never
  std::vector<Round> sent_round_;   // round + 1 of the last send on this (sender) slot
  struct Outgoing {
    std::size_t slot;  // receiver slot
    NodeId dst;
    Msg msg;
  };
  std::vector<Outgoing> outbox_;
  std::map<Round, std::vector<NodeId>> wakeups_;
  std::vector<Round> stepped_;  // round + 1 in which v was last queued for a step
  std::vector<NodeId> current_nodes_;
  RunTrace trace_;
  std::vector<std::uint8_t> done_;
};

inline std::size_t Context::degree() const { return e_.tree_.degree(v_); }
inline const Tree& Context::tree() const { return e_.tree_; }
inline bool Context::terminated() const { return e_.done_[v_] != 0; }

template <class Program>
RunTrace Engine::run(Program& program) {
  constexpr bool kFingerprint = requires(Program& p, NodeId v) { p.output_fingerprint(v); };
  std::vector<std::uint64_t> fingerprint;
  if constexpr (kFingerprint) fingerprint.assign(tree_.size(), 0);

  current_nodes_.resize(tree_.size());
  for (NodeId v = 0; v < tree_.size(); ++v) current_nodes_[v] = v;
  Round r = 0;
  while (true) {
    begin_round(r);
    for (NodeId v : current_nodes_) {
      if (done_[v]) continue;
      Context ctx(*this, v, r);
      program.step(ctx);
      if constexpr (kFingerprint)
        if (done_[v]) fingerprint[v] = program.output_fingerprint(v);
    }
    trace_.rounds_executed = r;
    if (done()) {
      trace_.messages_dropped += outbox_.size();  // every receiver has terminated
      outbox_.clear();
      break;
    }
    deliver();
    Round next;
    if (!outbox_.empty()) {
      next = r + 1;
    } else {
      auto it = wakeups_.upper_bound(r);
      if (it == wakeups_.end())
        throw Error("simulation stalled at round " + std::to_string(r) + " with " + std::to_string(alive_) +
                    " nodes still running");
      next = it->first;
    }
    if (next > max_rounds_) throw Error("simulation exceeded " + std::to_string(max_rounds_) + " rounds");
    r = next;
  }
  if constexpr (kFingerprint) {
    for (NodeId v = 0; v < tree_.size(); ++v)
      if (program.output_fingerprint(v) != fingerprint[v])
        throw Error("node " + std::to_string(v) + " changed its output after terminating");
  }
  return std::move(trace_);
}

template <class Program>
RunTrace run(const Tree& tree, Program& program, Round max_rounds) {
  Engine engine(tree, max_rounds);
  return engine.run(program);
}

// Node program that terminates each node at a precomputed round. Used by
// solvers whose outputs come from a central computation with an honest
// round charge.
class ScheduleProgram {
 public:
  explicit ScheduleProgram(std::span<const Round> rounds) : rounds_(rounds) {}
  void step(Context& ctx) {
    const Round t = rounds_[ctx.node()];
    if (ctx.round() >= t) ctx.terminate();
    else ctx.wake_at(t);
  }

 private:
  std::span<const Round> rounds_;
};

}  // namespace lcl
