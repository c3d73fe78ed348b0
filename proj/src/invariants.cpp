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

#include "asymq/invariants.hpp"

#include <set>
#include <stdexcept>

#include "asymq/register_protocols.hpp"

namespace asymq {

using Kind = TraceRecord::Kind;

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::kAuthRegister: return "auth-register";
    case Protocol::kDwRegister: return "dw-register";
    case Protocol::kConsistentBcast: return "consistent-bcast";
    case Protocol::kReliableBcast: return "reliable-bcast";
  }
  return "?";
}

Protocol protocol_from_string(const std::string& s) {
  for (Protocol p : {Protocol::kAuthRegister, Protocol::kDwRegister,
                     Protocol::kConsistentBcast, Protocol::kReliableBcast}) {
    if (s == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown protocol '" + s + "'");
}

CheckContext make_check_context(Protocol protocol, ProcessId origin,
                                const AsymmetricFamily& quorums,
                                const AsymmetricFamily& fail_prone, ProcessSet faulty) {
  CheckContext ctx;
  ctx.protocol = protocol;
  ctx.origin = origin;
  ctx.faulty = faulty;
  ctx.classification = classify(fail_prone, faulty);
  ctx.guild = maximal_guild(quorums, fail_prone, faulty);
  return ctx;
}

namespace {

std::string name(const ExecutionTrace& t, ProcessId p) {
  return static_cast<std::size_t>(p) < t.names.size() ? t.names[static_cast<std::size_t>(p)]
                                                      : default_name(p);
}

void fail(CheckReport& out, std::string invariant, std::string detail) {
  out.violations.push_back({std::move(invariant), std::move(detail)});
}

bool is_wise(const CheckContext& ctx, ProcessId p) {
  return ctx.classification.kinds.at(static_cast<std::size_t>(p)) == ProcessKind::kWise;
}

struct Operation {
  int id = 0;
  ProcessId process = 0;
  OpKind op = OpKind::kRead;
  std::string value;  // written value or returned value
  std::size_t invoked_at = 0;
  std::optional<std::size_t> responded_at;
};

std::vector<Operation> operations(const ExecutionTrace& trace) {
  std::vector<Operation> ops;
  std::map<int, std::size_t> by_id;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    if (r.kind == Kind::kInvoke) {
      by_id[r.invocation] = ops.size();
      ops.push_back({r.invocation, r.process, *r.op, r.value.value_or(""), i, std::nullopt});
    } else if (r.kind == Kind::kRespond) {
      Operation& op = ops.at(by_id.at(r.invocation));
      op.responded_at = i;
      if (op.op == OpKind::kRead) op.value = r.value.value_or("");
    }
  }
  return ops;
}

}  // namespace

void check_well_formed(const ExecutionTrace& trace, const CheckContext& ctx, CheckReport& out) {
  const std::size_t n = trace.names.size();
  // Outstanding sends per channel, in sequence order.
  std::vector<std::map<std::int64_t, const TraceRecord*>> sent(n * n);
  std::vector<std::int64_t> next_send(n * n, 0);
  std::vector<std::int64_t> next_deliver(n * n, 0);

  for (const TraceRecord& r : trace.records) {
    if (r.kind != Kind::kSend && r.kind != Kind::kDeliver) continue;
    const std::size_t ch = static_cast<std::size_t>(r.from) * n + static_cast<std::size_t>(r.to);
    const std::string link = name(trace, r.from) + "->" + name(trace, r.to);
    if (r.kind == Kind::kSend) {
      if (r.seq != next_send[ch]++) fail(out, "well-formed", "send sequence gap on " + link);
      sent[ch][r.seq] = &r;
      continue;
    }
    auto it = sent[ch].find(r.seq);
    if (it == sent[ch].end()) {
      fail(out, "no-duplication", "delivery without matching send on " + link);
      continue;
    }
    if (r.seq != next_deliver[ch]) fail(out, "fifo", "out-of-order delivery on " + link);
    next_deliver[ch] = r.seq + 1;
    if (!(*it->second->msg == *r.msg)) fail(out, "no-spoofing", "payload altered on " + link);
    sent[ch].erase(it);
  }

  if (trace.truncated) return;
  for (std::size_t ch = 0; ch < sent.size(); ++ch) {
    for (const auto& [seq, rec] : sent[ch]) {
      if (ctx.faulty.contains(rec->from) || ctx.faulty.contains(rec->to)) continue;
      fail(out, "fairness",
           "message " + std::to_string(seq) + " on " + name(trace, rec->from) + "->" +
               name(trace, rec->to) + " never delivered");
    }
  }
}

void check_broadcast(const ExecutionTrace& trace, const CheckContext& ctx, CheckReport& out) {
  const int n = static_cast<int>(trace.names.size());
  const bool sender_correct = !ctx.faulty.contains(ctx.origin);
  const bool reliable = ctx.protocol == Protocol::kReliableBcast;
  const std::string event = reliable ? "r-deliver" : "c-deliver";

  std::optional<std::string> broadcast;
  std::map<ProcessId, std::vector<std::string>> delivered;
  std::set<std::string> wise_readys;
  for (const TraceRecord& r : trace.records) {
    if (r.kind == Kind::kInvoke && r.process == ctx.origin && r.op == OpKind::kBroadcast) {
      if (!broadcast) broadcast = r.value;
    } else if (r.kind == Kind::kOutput && r.event == event) {
      delivered[r.process].push_back(*r.value);
    } else if (r.kind == Kind::kSend && is_wise(ctx, r.from)) {
      if (const auto* ready = std::get_if<ReadyMsg>(&*r.msg)) wise_readys.insert(ready->m);
    }
  }

  std::optional<std::string> wise_value;
  for (const auto& [p, values] : delivered) {
    if (ctx.faulty.contains(p)) continue;
    if (values.size() > 1) fail(out, "integrity", name(trace, p) + " delivered more than once");
    if (!is_wise(ctx, p)) continue;
    const std::string& v = values.front();
    if (wise_value && *wise_value != v) {
      fail(out, "consistency", "wise processes delivered '" + *wise_value + "' and '" + v + "'");
    }
    if (!wise_value) wise_value = v;
    const bool scoped = !reliable || ctx.guild.has_value();
    if (sender_correct && scoped && broadcast && v != *broadcast) {
      fail(out, "integrity", name(trace, p) + " delivered '" + v + "' but sender broadcast '" +
                                 *broadcast + "'");
    }
    if (ctx.guild && !ctx.guild->contains(p)) {
      out.wise_outside_guild_delivered = out.wise_outside_guild_delivered.with(p);
    }
  }

  if (reliable && ctx.guild && wise_readys.size() > 1) {
    fail(out, "uniform-ready", "wise processes sent READY with different payloads");
  }

  if (trace.truncated) return;
  if (!reliable && sender_correct && broadcast) {
    for (ProcessId p = 0; p < n; ++p) {
      if (is_wise(ctx, p) && !delivered.count(p)) {
        fail(out, "validity", "wise " + name(trace, p) + " never delivered");
      }
    }
  }
  if (reliable && ctx.guild) {
    const bool must_deliver = (sender_correct && broadcast) || wise_value.has_value();
    for (ProcessId p : ctx.guild->members()) {
      if (must_deliver && !delivered.count(p)) {
        fail(out, sender_correct ? "validity" : "totality",
             "guild member " + name(trace, p) + " never delivered");
      }
    }
  }
}

void check_register(const ExecutionTrace& trace, const CheckContext& ctx, CheckReport& out) {
  const std::vector<Operation> ops = operations(trace);
  const ProcessId writer = ctx.origin;
  const bool writer_correct = !ctx.faulty.contains(writer);

  std::set<std::string> written{kInitialValue};
  for (const Operation& op : ops) {
    if (op.op == OpKind::kWrite && op.process == writer) written.insert(op.value);
  }

  for (const Operation& rd : ops) {
    if (rd.op != OpKind::kRead || !rd.responded_at || ctx.faulty.contains(rd.process)) continue;
    std::set<std::string> allowed;
    std::optional<std::size_t> latest;
    std::string latest_value = kInitialValue;
    for (const Operation& w : ops) {
      if (w.op != OpKind::kWrite || w.process != writer) continue;
      if (w.responded_at && *w.responded_at < rd.invoked_at) {
        if (!latest || *w.responded_at > *latest) {
          latest = w.responded_at;
          latest_value = w.value;
        }
      } else if (w.invoked_at < *rd.responded_at) {
        allowed.insert(w.value);
      }
    }
    allowed.insert(latest_value);
    const bool safe = allowed.count(rd.value) > 0;
    if (!safe) out.safety_unscoped_violated = true;
    if (!safe && writer_correct && is_wise(ctx, writer) && is_wise(ctx, rd.process)) {
      fail(out, "regular-safety",
           "read " + std::to_string(rd.id) + " by " + name(trace, rd.process) + " returned '" +
               rd.value + "', expected '" + latest_value + "' or a concurrent write");
    }
    if (ctx.protocol == Protocol::kAuthRegister && writer_correct && !written.count(rd.value)) {
      fail(out, "signed-values",
           "read " + std::to_string(rd.id) + " returned a value the writer never wrote");
    }
  }

  std::map<ProcessId, std::pair<std::int64_t, std::int64_t>> last;  // ts, pts
  for (const TraceRecord& r : trace.records) {
    if (r.kind != Kind::kState || ctx.faulty.contains(r.process)) continue;
    const std::int64_t pts = r.pts.value_or(r.ts);
    auto it = last.find(r.process);
    if (it != last.end() && (r.ts < it->second.first || pts < it->second.second)) {
      fail(out, "monotonicity", name(trace, r.process) + " timestamp decreased");
    }
    if (ctx.protocol == Protocol::kDwRegister && r.pts && pts != r.ts && pts != r.ts + 1) {
      fail(out, "prewrite-gap", name(trace, r.process) + " has pts outside {ts, ts+1}");
    }
    last[r.process] = {r.ts, pts};
  }

  if (trace.truncated) return;
  for (const Operation& op : ops) {
    if (!op.responded_at && is_wise(ctx, op.process)) {
      fail(out, "liveness", std::string(to_string(op.op)) + " " + std::to_string(op.id) +
                                " by wise " + name(trace, op.process) + " never completed");
    }
  }
}

CheckReport check_trace(const ExecutionTrace& trace, const CheckContext& ctx) {
  CheckReport report;
  check_well_formed(trace, ctx, report);
  if (is_register(ctx.protocol)) {
    check_register(trace, ctx, report);
  } else {
    check_broadcast(trace, ctx, report);
  }
  return report;
}

std::map<ProcessId, std::string> deliveries(const ExecutionTrace& trace) {
  std::map<ProcessId, std::string> out;
  for (const TraceRecord& r : trace.records) {
    if (r.kind == Kind::kOutput && (r.event == "c-deliver" || r.event == "r-deliver")) {
      out.emplace(r.process, *r.value);
    }
  }
  return out;
}

std::map<int, std::string> read_results(const ExecutionTrace& trace) {
  std::map<int, std::string> out;
  for (const Operation& op : operations(trace)) {
    if (op.op == OpKind::kRead && op.responded_at) out[op.id] = op.value;
  }
  return out;
}

}  // namespace asymq
