/*
 * Copyright (c) 2026, The asymq Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ASYMQ_SIMNET_HPP_
#define ASYMQ_SIMNET_HPP_

// Deterministic discrete-event network: reliable authenticated FIFO links,
// a seeded or scripted adversarial scheduler, and a full execution trace.

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymq/messages.hpp"
#include "asymq/process_set.hpp"
#include "asymq/signatures.hpp"

namespace asymq {

enum class OpKind { kWrite, kRead, kBroadcast };

const char* to_string(OpKind op);
OpKind op_from_string(const std::string& s);

/// An operation injected at a process. It fires once the logical clock
/// reaches `at_step`, invocation `after` (if any) has completed, and every
/// earlier invocation at the same process has completed.
struct Invocation {
  int id = 0;
  ProcessId process = 0;
  OpKind op = OpKind::kRead;
  std::string value;
  std::optional<int> after;
  std::int64_t at_step = 0;
};

/// Blocks channel from->to while active. Activation starts when invocation
/// `start_invoked` fires (or at time zero) and ends when `end_completed`
/// responds (or never).
struct Hold {
  ProcessId from = 0;
  ProcessId to = 0;
  std::optional<int> start_invoked;
  std::optional<int> end_completed;
};

enum class SchedulePolicy { kRandom, kGlobalFifo };

struct ScriptStep {
  ProcessId from = 0;
  ProcessId to = 0;
};

struct Schedule {
  std::uint64_t seed = 0;
  SchedulePolicy policy = SchedulePolicy::kRandom;
  std::vector<ScriptStep> script;  // consumed first; overrides holds
  std::vector<Hold> holds;
  /// All holds lift after this many deliveries, so held links are
  /// eventually served even while other traffic never stops.
  std::int64_t hold_limit = 1000;
};

struct TraceRecord {
  enum class Kind { kSend, kDeliver, kInvoke, kRespond, kOutput, kState, kRelease, kEnd };

  std::int64_t step = 0;
  Kind kind = Kind::kSend;
  // send / deliver
  ProcessId from = -1;
  ProcessId to = -1;
  std::int64_t seq = -1;
  std::optional<Message> msg;
  // invoke / respond / output / state
  ProcessId process = -1;
  int invocation = -1;
  std::optional<OpKind> op;
  std::optional<std::string> value;
  std::string event;
  std::int64_t ts = 0;
  std::optional<std::int64_t> pts;
  bool truncated = false;
};

const char* to_string(TraceRecord::Kind k);

struct ExecutionTrace {
  std::vector<std::string> names;
  std::optional<std::string> instance;
  std::vector<TraceRecord> records;
  bool truncated = false;

  nlohmann::ordered_json record_json(const TraceRecord& r) const;
  /// One JSON object per line, newline-terminated.
  std::string to_jsonl() const;
};

class Simulator;

/// Handle given to a process while it handles an event.
class Context {
 public:
  ProcessId self() const { return self_; }
  int n() const;
  std::int64_t step() const;

  void send(ProcessId to, Message msg);
  void send_all(const Message& msg);
  void respond(int invocation, std::optional<std::string> value = std::nullopt);
  void output(std::string event, std::string value);
  void record_state(std::int64_t ts, std::optional<std::int64_t> pts = std::nullopt);

  const SigningKey& key() const;
  const SignatureRegistry& verifier() const;

 private:
  friend class Simulator;
  Context(Simulator* sim, ProcessId self) : sim_(sim), self_(self) {}
  Simulator* sim_;
  ProcessId self_;
};

class Process {
 public:
  virtual ~Process() = default;
  virtual void on_start(Context&) {}
  virtual void on_invoke(const Invocation&, Context&) {}
  virtual void on_message(ProcessId from, const Message& msg, Context& ctx) = 0;
};

struct SimConfig {
  std::vector<std::string> names;
  std::optional<std::string> instance;
  std::vector<Invocation> invocations;
  Schedule schedule;
  std::int64_t max_steps = 100000;
};

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Simulator {
 public:
  explicit Simulator(SimConfig config);

  int n() const { return static_cast<int>(config_.names.size()); }
  SignatureRegistry& registry() { return registry_; }
  void set_process(ProcessId p, std::unique_ptr<Process> process);

  /// Starts all processes, then steps to quiescence or the step bound.
  ExecutionTrace run();

  /// Fires due invocations and delivers one envelope. Returns false at
  /// quiescence. `start()` must have been called.
  bool deliver_next();
  void start();
  ExecutionTrace finish();

 private:
  friend class Context;

  struct Envelope {
    ProcessId from;
    ProcessId to;
    std::int64_t seq;
    std::uint64_t send_index;
    Message msg;
  };

  std::deque<Envelope>& channel(ProcessId from, ProcessId to) {
    return channels_[static_cast<std::size_t>(from * n() + to)];
  }
  bool hold_active(const Hold& h) const;
  bool channel_held(ProcessId from, ProcessId to) const;
  bool invocation_ready(std::size_t idx, bool ignore_clock) const;
  bool fire_invocations();
  std::optional<std::size_t> pick_channel();
  void deliver(std::size_t ch);
  void push(TraceRecord r);
  void lift_holds();

  SimConfig config_;
  SignatureRegistry registry_;
  std::vector<SigningKey> keys_;
  std::vector<std::unique_ptr<Process>> processes_;
  std::vector<std::deque<Envelope>> channels_;
  std::vector<std::int64_t> next_seq_;
  std::vector<bool> invoked_;
  std::vector<bool> completed_;
  bool holds_lifted_ = false;
  std::size_t script_pos_ = 0;
  std::mt19937_64 rng_;
  std::int64_t step_ = 0;
  std::int64_t delivered_ = 0;
  std::uint64_t send_index_ = 0;
  std::size_t in_flight_ = 0;
  bool started_ = false;
  ExecutionTrace trace_;
};

/// Declarative Byzantine behaviour for a faulty process.
///
/// Document form:
///   {"base": "silent" | "honest",
///    "start": [action...],
///    "rules": [{"match": {...}, "actions": [action...],
///               "forward": bool, "once": bool}]}
///   action: {"to": "all" | "sender" | [names], "msg": {...}}
///
/// `match` compares "type", "from" (sender name) and any other message
/// field for equality. String values "$field" inside an action message are
/// replaced by that field of the triggering message. The first matching
/// live rule fires; unmatched messages (and matched ones with "forward")
/// go to the honest machine when the base is honest.
class ByzantineProcess : public Process {
 public:
  ByzantineProcess(const nlohmann::json& script, std::vector<std::string> names,
                   std::unique_ptr<Process> honest);

  void on_start(Context& ctx) override;
  void on_invoke(const Invocation& inv, Context& ctx) override;
  void on_message(ProcessId from, const Message& msg, Context& ctx) override;

 private:
  struct Action {
    std::vector<ProcessId> to;  // empty means reply to sender
    bool to_sender = false;
    nlohmann::json msg;
  };
  struct Rule {
    nlohmann::json match;
    std::vector<Action> actions;
    bool forward = false;
    bool once = false;
    bool spent = false;
  };

  Action parse_action(const nlohmann::json& a) const;
  void run_actions(const std::vector<Action>& actions, ProcessId sender,
                   const nlohmann::json* trigger, Context& ctx) const;

  std::vector<std::string> names_;
  std::unique_ptr<Process> honest_;
  std::vector<Action> start_;
  std::vector<Rule> rules_;
};

}  // namespace asymq

#endif  // ASYMQ_SIMNET_HPP_
