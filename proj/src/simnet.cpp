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

#include "asymq/simnet.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace asymq {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(OpKind op) {
  switch (op) {
    case OpKind::kWrite: return "write";
    case OpKind::kRead: return "read";
    case OpKind::kBroadcast: return "broadcast";
  }
  return "?";
}

OpKind op_from_string(const std::string& s) {
  if (s == "write") return OpKind::kWrite;
  if (s == "read") return OpKind::kRead;
  if (s == "broadcast") return OpKind::kBroadcast;
  throw std::invalid_argument("unknown operation '" + s + "'");
}

const char* to_string(TraceRecord::Kind k) {
  using K = TraceRecord::Kind;
  switch (k) {
    case K::kSend: return "send";
    case K::kDeliver: return "deliver";
    case K::kInvoke: return "invoke";
    case K::kRespond: return "respond";
    case K::kOutput: return "output";
    case K::kState: return "state";
    case K::kRelease: return "release";
    case K::kEnd: return "end";
  }
  return "?";
}

ordered_json ExecutionTrace::record_json(const TraceRecord& r) const {
  using K = TraceRecord::Kind;
  auto name = [&](ProcessId p) {
    return static_cast<std::size_t>(p) < names.size() ? names[static_cast<std::size_t>(p)]
                                                      : default_name(p);
  };
  ordered_json j;
  j["step"] = r.step;
  j["kind"] = to_string(r.kind);
  switch (r.kind) {
    case K::kSend:
    case K::kDeliver:
      j["from"] = name(r.from);
      j["to"] = name(r.to);
      j["seq"] = r.seq;
      if (instance) j["instance"] = *instance;
      j["msg"] = to_json(*r.msg, names);
      break;
    case K::kInvoke:
      j["process"] = name(r.process);
      j["id"] = r.invocation;
      j["op"] = to_string(*r.op);
      if (r.value) j["value"] = *r.value;
      break;
    case K::kRespond:
      j["process"] = name(r.process);
      j["id"] = r.invocation;
      if (r.value) j["value"] = *r.value;
      break;
    case K::kOutput:
      j["process"] = name(r.process);
      j["event"] = r.event;
      j["value"] = r.value.value_or("");
      break;
    case K::kState:
      j["process"] = name(r.process);
      j["ts"] = r.ts;
      if (r.pts) j["pts"] = *r.pts;
      break;
    case K::kRelease:
      break;
    case K::kEnd:
      j["truncated"] = r.truncated;
      break;
  }
  return j;
}

std::string ExecutionTrace::to_jsonl() const {
  std::string out;
  for (const TraceRecord& r : records) {
    out += record_json(r).dump();
    out += '\n';
  }
  return out;
}

// Context

int Context::n() const { return sim_->n(); }
std::int64_t Context::step() const { return sim_->step_; }

void Context::send(ProcessId to, Message msg) {
  if (to < 0 || to >= sim_->n()) {
    throw SimError("send to unknown process " + std::to_string(to));
  }
  const auto ch = static_cast<std::size_t>(self_ * sim_->n() + to);
  TraceRecord r;
  r.step = sim_->step_;
  r.kind = TraceRecord::Kind::kSend;
  r.from = self_;
  r.to = to;
  r.seq = sim_->next_seq_[ch]++;
  r.msg = msg;
  sim_->push(std::move(r));
  sim_->channels_[ch].push_back(
      Simulator::Envelope{self_, to, sim_->next_seq_[ch] - 1, sim_->send_index_++, std::move(msg)});
  ++sim_->in_flight_;
}

void Context::send_all(const Message& msg) {
  for (ProcessId p = 0; p < sim_->n(); ++p) send(p, msg);
}

void Context::respond(int invocation, std::optional<std::string> value) {
  const auto& invs = sim_->config_.invocations;
  auto it = std::find_if(invs.begin(), invs.end(),
                         [&](const Invocation& inv) { return inv.id == invocation; });
  if (it == invs.end() || it->process != self_) {
    throw SimError("response to unknown invocation " + std::to_string(invocation));
  }
  const auto idx = static_cast<std::size_t>(it - invs.begin());
  if (!sim_->invoked_[idx] || sim_->completed_[idx]) {
    throw SimError("invocation " + std::to_string(invocation) + " is not pending");
  }
  sim_->completed_[idx] = true;
  TraceRecord r;
  r.step = sim_->step_;
  r.kind = TraceRecord::Kind::kRespond;
  r.process = self_;
  r.invocation = invocation;
  r.value = std::move(value);
  sim_->push(std::move(r));
}

void Context::output(std::string event, std::string value) {
  TraceRecord r;
  r.step = sim_->step_;
  r.kind = TraceRecord::Kind::kOutput;
  r.process = self_;
  r.event = std::move(event);
  r.value = std::move(value);
  sim_->push(std::move(r));
}

void Context::record_state(std::int64_t ts, std::optional<std::int64_t> pts) {
  TraceRecord r;
  r.step = sim_->step_;
  r.kind = TraceRecord::Kind::kState;
  r.process = self_;
  r.ts = ts;
  r.pts = pts;
  sim_->push(std::move(r));
}

const SigningKey& Context::key() const {
  return sim_->keys_[static_cast<std::size_t>(self_)];
}

const SignatureRegistry& Context::verifier() const { return sim_->registry_; }

// Simulator

Simulator::Simulator(SimConfig config)
    : config_(std::move(config)), rng_(config_.schedule.seed) {
  const int size = n();
  if (size <= 0 || size > kMaxProcesses) throw SimError("invalid process count");
  for (ProcessId p = 0; p < size; ++p) keys_.push_back(registry_.key_for(p));
  processes_.resize(static_cast<std::size_t>(size));
  channels_.resize(static_cast<std::size_t>(size * size));
  next_seq_.assign(static_cast<std::size_t>(size * size), 0);
  invoked_.assign(config_.invocations.size(), false);
  completed_.assign(config_.invocations.size(), false);
  for (const Invocation& inv : config_.invocations) {
    if (inv.process < 0 || inv.process >= size) {
      throw SimError("invocation " + std::to_string(inv.id) + " at unknown process");
    }
  }
  auto check_pair = [&](ProcessId a, ProcessId b) {
    if (a < 0 || a >= size || b < 0 || b >= size) throw SimError("channel out of range");
  };
  for (const Hold& h : config_.schedule.holds) check_pair(h.from, h.to);
  for (const ScriptStep& s : config_.schedule.script) check_pair(s.from, s.to);
  trace_.names = config_.names;
  trace_.instance = config_.instance;
}

void Simulator::set_process(ProcessId p, std::unique_ptr<Process> process) {
  processes_.at(static_cast<std::size_t>(p)) = std::move(process);
}

void Simulator::push(TraceRecord r) { trace_.records.push_back(std::move(r)); }

bool Simulator::hold_active(const Hold& h) const {
  if (holds_lifted_) return false;
  auto state = [&](int id, const std::vector<bool>& flags) {
    for (std::size_t i = 0; i < config_.invocations.size(); ++i) {
      if (config_.invocations[i].id == id) return static_cast<bool>(flags[i]);
    }
    return false;
  };
  if (h.start_invoked && !state(*h.start_invoked, invoked_)) return false;
  if (h.end_completed && state(*h.end_completed, completed_)) return false;
  return true;
}

bool Simulator::channel_held(ProcessId from, ProcessId to) const {
  return std::any_of(config_.schedule.holds.begin(), config_.schedule.holds.end(),
                     [&](const Hold& h) {
                       return h.from == from && h.to == to && hold_active(h);
                     });
}

bool Simulator::invocation_ready(std::size_t idx, bool ignore_clock) const {
  const Invocation& inv = config_.invocations[idx];
  if (invoked_[idx]) return false;
  if (!ignore_clock && step_ < inv.at_step) return false;
  for (std::size_t k = 0; k < config_.invocations.size(); ++k) {
    const Invocation& other = config_.invocations[k];
    if (k < idx && other.process == inv.process && !completed_[k]) return false;
    if (inv.after && other.id == *inv.after && !completed_[k]) return false;
  }
  return true;
}

bool Simulator::fire_invocations() {
  bool any = false;
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < config_.invocations.size(); ++i) {
      if (!invocation_ready(i, false)) continue;
      const Invocation& inv = config_.invocations[i];
      invoked_[i] = true;
      TraceRecord r;
      r.step = step_;
      r.kind = TraceRecord::Kind::kInvoke;
      r.process = inv.process;
      r.invocation = inv.id;
      r.op = inv.op;
      if (inv.op != OpKind::kRead) r.value = inv.value;
      push(std::move(r));
      Context ctx(this, inv.process);
      processes_[static_cast<std::size_t>(inv.process)]->on_invoke(inv, ctx);
      progress = any = true;
    }
  }
  return any;
}

std::optional<std::size_t> Simulator::pick_channel() {
  const auto& script = config_.schedule.script;
  if (script_pos_ < script.size()) {
    const ScriptStep& s = script[script_pos_];
    const auto ch = static_cast<std::size_t>(s.from * n() + s.to);
    if (channels_[ch].empty()) {
      throw SimError("script step " + std::to_string(script_pos_) + ": nothing in flight on " +
                     config_.names[static_cast<std::size_t>(s.from)] + "->" +
                     config_.names[static_cast<std::size_t>(s.to)]);
    }
    ++script_pos_;
    return ch;
  }
  std::vector<std::size_t> ready;
  for (std::size_t ch = 0; ch < channels_.size(); ++ch) {
    if (channels_[ch].empty()) continue;
    const Envelope& head = channels_[ch].front();
    if (channel_held(head.from, head.to)) continue;
    ready.push_back(ch);
  }
  if (ready.empty()) return std::nullopt;
  if (config_.schedule.policy == SchedulePolicy::kGlobalFifo) {
    return *std::min_element(ready.begin(), ready.end(), [&](std::size_t a, std::size_t b) {
      return channels_[a].front().send_index < channels_[b].front().send_index;
    });
  }
  return ready[static_cast<std::size_t>(rng_() % ready.size())];
}

void Simulator::deliver(std::size_t ch) {
  Envelope env = std::move(channels_[ch].front());
  channels_[ch].pop_front();
  --in_flight_;
  ++step_;
  ++delivered_;
  TraceRecord r;
  r.step = step_;
  r.kind = TraceRecord::Kind::kDeliver;
  r.from = env.from;
  r.to = env.to;
  r.seq = env.seq;
  r.msg = env.msg;
  push(std::move(r));
  Context ctx(this, env.to);
  processes_[static_cast<std::size_t>(env.to)]->on_message(env.from, env.msg, ctx);
}

void Simulator::lift_holds() {
  holds_lifted_ = true;
  TraceRecord r;
  r.step = step_;
  r.kind = TraceRecord::Kind::kRelease;
  push(std::move(r));
}

void Simulator::start() {
  if (started_) throw SimError("simulator already started");
  for (std::size_t p = 0; p < processes_.size(); ++p) {
    if (!processes_[p]) throw SimError("no machine for " + config_.names[p]);
  }
  started_ = true;
  for (ProcessId p = 0; p < n(); ++p) {
    Context ctx(this, p);
    processes_[static_cast<std::size_t>(p)]->on_start(ctx);
  }
}

bool Simulator::deliver_next() {
  if (!started_) throw SimError("simulator not started");
  for (;;) {
    fire_invocations();
    if (in_flight_ > 0 && delivered_ >= config_.max_steps) {
      trace_.truncated = true;
      return false;
    }
    if (!holds_lifted_ && !config_.schedule.holds.empty() &&
        delivered_ >= config_.schedule.hold_limit) {
      lift_holds();
    }
    if (auto ch = pick_channel()) {
      deliver(*ch);
      return true;
    }
    // Nothing deliverable: advance the clock to the next gated invocation.
    std::int64_t next = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < config_.invocations.size(); ++i) {
      if (invocation_ready(i, true)) next = std::min(next, config_.invocations[i].at_step);
    }
    if (next != std::numeric_limits<std::int64_t>::max()) {
      step_ = std::max(step_, next);
      continue;
    }
    if (in_flight_ > 0 && !holds_lifted_) {
      lift_holds();
      continue;
    }
    return false;
  }
}

ExecutionTrace Simulator::finish() {
  TraceRecord r;
  r.step = step_;
  r.kind = TraceRecord::Kind::kEnd;
  r.truncated = trace_.truncated;
  push(std::move(r));
  return std::move(trace_);
}

ExecutionTrace Simulator::run() {
  start();
  while (deliver_next()) {
  }
  return finish();
}

// ByzantineProcess

namespace {

ProcessId name_index(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("unknown process name '" + name + "'");
  return static_cast<ProcessId>(it - names.begin());
}

json substitute(const json& tmpl, const json* trigger) {
  if (tmpl.is_string() && trigger != nullptr) {
    const std::string& s = tmpl.get_ref<const std::string&>();
    if (s.size() > 1 && s[0] == '$' && trigger->contains(s.substr(1))) {
      return (*trigger)[s.substr(1)];
    }
    return tmpl;
  }
  if (tmpl.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : tmpl.items()) out[k] = substitute(v, trigger);
    return out;
  }
  return tmpl;
}

}  // namespace

ByzantineProcess::ByzantineProcess(const json& script, std::vector<std::string> names,
                                   std::unique_ptr<Process> honest)
    : names_(std::move(names)) {
  const std::string base = script.value("base", "silent");
  if (base == "honest") {
    if (!honest) throw std::invalid_argument("honest base requires a protocol machine");
    honest_ = std::move(honest);
  } else if (base != "silent") {
    throw std::invalid_argument("unknown byzantine base '" + base + "'");
  }
  if (script.contains("start")) {
    for (const json& a : script["start"]) start_.push_back(parse_action(a));
  }
  if (script.contains("rules")) {
    for (const json& r : script["rules"]) {
      Rule rule;
      rule.match = r.value("match", json::object());
      if (!rule.match.is_object()) throw std::invalid_argument("rule match must be an object");
      if (r.contains("actions")) {
        for (const json& a : r["actions"]) rule.actions.push_back(parse_action(a));
      }
      rule.forward = r.value("forward", false);
      rule.once = r.value("once", false);
      rules_.push_back(std::move(rule));
    }
  }
}

ByzantineProcess::Action ByzantineProcess::parse_action(const json& a) const {
  if (!a.is_object() || !a.contains("msg")) {
    throw std::invalid_argument("byzantine action needs 'to' and 'msg'");
  }
  Action act;
  act.msg = a["msg"];
  const json to = a.value("to", json("all"));
  if (to == "all") {
    for (ProcessId p = 0; p < static_cast<ProcessId>(names_.size()); ++p) act.to.push_back(p);
  } else if (to == "sender") {
    act.to_sender = true;
  } else if (to.is_array()) {
    for (const json& name : to) act.to.push_back(name_index(names_, name.get<std::string>()));
  } else if (to.is_string()) {
    act.to.push_back(name_index(names_, to.get<std::string>()));
  } else {
    throw std::invalid_argument("bad action target " + to.dump());
  }
  // Validate the template eagerly when it has no placeholders.
  if (act.msg.dump().find("\"$") == std::string::npos) message_from_json(act.msg, names_);
  return act;
}

void ByzantineProcess::run_actions(const std::vector<Action>& actions, ProcessId sender,
                                   const json* trigger, Context& ctx) const {
  for (const Action& a : actions) {
    const Message msg = message_from_json(substitute(a.msg, trigger), names_);
    if (a.to_sender) {
      if (sender >= 0) ctx.send(sender, msg);
      continue;
    }
    for (ProcessId p : a.to) ctx.send(p, msg);
  }
}

void ByzantineProcess::on_start(Context& ctx) {
  run_actions(start_, -1, nullptr, ctx);
  if (honest_) honest_->on_start(ctx);
}

void ByzantineProcess::on_invoke(const Invocation& inv, Context& ctx) {
  if (honest_) honest_->on_invoke(inv, ctx);
}

void ByzantineProcess::on_message(ProcessId from, const Message& msg, Context& ctx) {
  const json trigger = json::parse(to_json(msg, names_).dump());
  for (Rule& rule : rules_) {
    if (rule.spent) continue;
    bool hit = true;
    for (const auto& [key, want] : rule.match.items()) {
      if (key == "from") {
        hit = want == names_[static_cast<std::size_t>(from)];
      } else {
        hit = trigger.contains(key) && trigger[key] == want;
      }
      if (!hit) break;
    }
    if (!hit) continue;
    if (rule.once) rule.spent = true;
    run_actions(rule.actions, from, &trigger, ctx);
    if (rule.forward && honest_) honest_->on_message(from, msg, ctx);
    return;
  }
  if (honest_) honest_->on_message(from, msg, ctx);
}

}  // namespace asymq
