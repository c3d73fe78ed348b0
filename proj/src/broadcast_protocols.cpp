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

#include "asymq/broadcast_protocols.hpp"

#include <set>

namespace asymq {

std::optional<std::string> first_hit(const SenderMap& received, const SetFamily& family) {
  std::set<std::string> payloads;
  for (const auto& m : received) {
    if (m) payloads.insert(*m);
  }
  for (const std::string& m : payloads) {
    ProcessSet senders;
    for (std::size_t j = 0; j < received.size(); ++j) {
      if (received[j] == m) senders = senders.with(static_cast<ProcessId>(j));
    }
    if (contains_member(senders, family)) return m;
  }
  return std::nullopt;
}

ConsistentBroadcast::ConsistentBroadcast(ProcessId sender, SetFamily quorums)
    : sender_(sender),
      quorums_(std::move(quorums)),
      echos_(static_cast<std::size_t>(quorums_.universe_size())) {}

void ConsistentBroadcast::on_invoke(const Invocation& inv, Context& ctx) {
  if (inv.op != OpKind::kBroadcast || ctx.self() != sender_) {
    throw SimError("broadcast invoked at a process other than the sender");
  }
  ctx.send_all(SendMsg{inv.value});
  ctx.respond(inv.id);
}

void ConsistentBroadcast::on_send(ProcessId from, const SendMsg& m, Context& ctx) {
  if (from != sender_ || sentecho_) return;
  sentecho_ = true;
  ctx.send_all(EchoMsg{m.m});
}

void ConsistentBroadcast::on_echo(ProcessId from, const EchoMsg& m) {
  auto& slot = echos_[static_cast<std::size_t>(from)];
  if (!slot) slot = m.m;
}

void ConsistentBroadcast::on_message(ProcessId from, const Message& msg, Context& ctx) {
  if (const auto* s = std::get_if<SendMsg>(&msg)) {
    on_send(from, *s, ctx);
  } else if (const auto* e = std::get_if<EchoMsg>(&msg)) {
    on_echo(from, *e);
    if (delivered_) return;
    if (auto m = quorum_hit(echos_, quorums_)) {
      delivered_ = true;
      ctx.output("c-deliver", *m);
    }
  }
}

ReliableBroadcast::ReliableBroadcast(ProcessId sender, SetFamily quorums, SetFamily kernels)
    : ConsistentBroadcast(sender, std::move(quorums)),
      kernels_(std::move(kernels)),
      readys_(echos_.size()) {}

void ReliableBroadcast::on_message(ProcessId from, const Message& msg, Context& ctx) {
  if (const auto* s = std::get_if<SendMsg>(&msg)) {
    on_send(from, *s, ctx);
    return;
  }
  if (const auto* e = std::get_if<EchoMsg>(&msg)) {
    on_echo(from, *e);
  } else if (const auto* r = std::get_if<ReadyMsg>(&msg)) {
    auto& slot = readys_[static_cast<std::size_t>(from)];
    if (!slot) slot = r->m;
  } else {
    return;
  }
  evaluate(ctx);
}

void ReliableBroadcast::evaluate(Context& ctx) {
  if (!sentready_) {
    if (auto m = quorum_hit(echos_, quorums_)) {
      sentready_ = true;
      ctx.send_all(ReadyMsg{*m});
    }
  }
  if (!sentready_) {
    if (auto m = kernel_hit(readys_, kernels_)) {
      sentready_ = true;
      ctx.send_all(ReadyMsg{*m});
    }
  }
  if (!delivered_) {
    if (auto m = quorum_hit(readys_, quorums_)) {
      delivered_ = true;
      ctx.output("r-deliver", *m);
    }
  }
}

}  // namespace asymq
