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

#include "asymq/register_protocols.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace asymq {

std::string highestval(std::span<const std::pair<std::int64_t, std::string>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("highestval of an empty set");
  return std::max_element(pairs.begin(), pairs.end())->second;
}

Signature genesis_signature(SignatureRegistry& registry, ProcessId writer) {
  return registry.key_for(writer).sign(write_payload(writer, 0, kInitialValue));
}

namespace {

void require_writer(ProcessId writer, const Context& ctx) {
  if (ctx.self() != writer) {
    throw SimError("write invoked at a process other than the writer");
  }
}

ProcessSet keys_of(const auto& map) {
  ProcessSet s;
  for (const auto& [p, _] : map) s = s.with(p);
  return s;
}

}  // namespace

// Signed register

AuthRegister::AuthRegister(ProcessId writer, SetFamily quorums, Signature genesis)
    : writer_(writer), quorums_(std::move(quorums)), sig_(std::move(genesis)) {}

void AuthRegister::on_start(Context& ctx) { ctx.record_state(ts_); }

void AuthRegister::on_invoke(const Invocation& inv, Context& ctx) {
  if (inv.op == OpKind::kWrite) {
    require_writer(writer_, ctx);
    ++wts_;
    const Signature sig = ctx.key().sign(write_payload(writer_, wts_, inv.value));
    pending_write_ = inv.id;
    acks_ = {};
    ctx.send_all(WriteMsg{wts_, inv.value, sig});
  } else if (inv.op == OpKind::kRead) {
    ++rid_;
    pending_read_ = inv.id;
    replies_.clear();
    ctx.send_all(ReadMsg{rid_});
  } else {
    throw SimError("register does not support broadcast");
  }
}

void AuthRegister::on_message(ProcessId from, const Message& msg, Context& ctx) {
  if (const auto* w = std::get_if<WriteMsg>(&msg)) {
    if (from != writer_ || !w->sig) return;
    if (w->ts > ts_) {
      ts_ = w->ts;
      v_ = w->value;
      sig_ = *w->sig;
      ctx.record_state(ts_);
    }
    ctx.send(writer_, AckMsg{w->ts});
  } else if (const auto* a = std::get_if<AckMsg>(&msg)) {
    if (!pending_write_ || a->ts != wts_) return;
    acks_ = acks_.with(from);
    if (contains_member(acks_, quorums_)) {
      const int id = *pending_write_;
      pending_write_.reset();
      ctx.respond(id);
    }
  } else if (const auto* r = std::get_if<ReadMsg>(&msg)) {
    ctx.send(from, ValueMsg{r->rid, ts_, v_, sig_});
  } else if (const auto* val = std::get_if<ValueMsg>(&msg)) {
    if (!pending_read_ || val->rid != rid_) return;
    if (!ctx.verifier().verify(writer_, write_payload(writer_, val->ts, val->value), val->sig)) {
      return;
    }
    replies_[from] = {val->ts, val->value};
    if (auto q = find_contained(quorums_, keys_of(replies_))) {
      std::vector<std::pair<std::int64_t, std::string>> pairs;
      for (ProcessId p : q->members()) pairs.push_back(replies_.at(p));
      const int id = *pending_read_;
      pending_read_.reset();
      ctx.respond(id, highestval(pairs));
    }
  }
}

// Double-write register

DoubleWriteRegister::DoubleWriteRegister(ProcessId writer, SetFamily quorums,
                                         SetFamily core_sets)
    : writer_(writer), quorums_(std::move(quorums)), core_sets_(std::move(core_sets)) {}

void DoubleWriteRegister::on_start(Context& ctx) { ctx.record_state(ts_, pts_); }

void DoubleWriteRegister::on_invoke(const Invocation& inv, Context& ctx) {
  if (inv.op == OpKind::kWrite) {
    require_writer(writer_, ctx);
    ++wts_;
    wv_ = inv.value;
    phase_ = Phase::kPreWrite;
    pending_write_ = inv.id;
    acks_ = {};
    ctx.send_all(PreWriteMsg{wts_, wv_});
  } else if (inv.op == OpKind::kRead) {
    ++rid_;
    pending_read_ = inv.id;
    readlist_.clear();
    wave_ = {};
    ctx.send_all(ReadMsg{rid_});
  } else {
    throw SimError("register does not support broadcast");
  }
}

void DoubleWriteRegister::on_message(ProcessId from, const Message& msg, Context& ctx) {
  if (const auto* pw = std::get_if<PreWriteMsg>(&msg)) {
    if (from != writer_ || pw->ts != pts_ + 1 || pts_ != ts_) return;
    pts_ = pw->ts;
    pv_ = pw->value;
    ctx.record_state(ts_, pts_);
    ctx.send(writer_, PreAckMsg{pw->ts});
  } else if (const auto* w = std::get_if<WriteMsg>(&msg)) {
    if (from != writer_ || w->ts != pts_ || w->value != pv_) return;
    ts_ = w->ts;
    v_ = w->value;
    ctx.record_state(ts_, pts_);
    ctx.send(writer_, AckMsg{w->ts});
  } else if (const auto* pa = std::get_if<PreAckMsg>(&msg)) {
    if (phase_ != Phase::kPreWrite || pa->ts != wts_) return;
    acks_ = acks_.with(from);
    if (contains_member(acks_, quorums_)) {
      phase_ = Phase::kWrite;
      acks_ = {};
      ctx.send_all(WriteMsg{wts_, wv_, std::nullopt});
    }
  } else if (const auto* a = std::get_if<AckMsg>(&msg)) {
    if (phase_ != Phase::kWrite || a->ts != wts_) return;
    acks_ = acks_.with(from);
    if (contains_member(acks_, quorums_)) {
      phase_ = Phase::kIdle;
      const int id = *pending_write_;
      pending_write_.reset();
      ctx.respond(id);
    }
  } else if (const auto* r = std::get_if<ReadMsg>(&msg)) {
    ctx.send(from, DwValueMsg{r->rid, pts_, pv_, ts_, v_});
  } else if (const auto* val = std::get_if<DwValueMsg>(&msg)) {
    on_value(from, *val, ctx);
  }
}

void DoubleWriteRegister::on_value(ProcessId from, const DwValueMsg& m, Context& ctx) {
  if (!pending_read_ || m.rid != rid_) return;
  const bool well_formed = m.pts == m.ts + 1 || (m.pts == m.ts && m.pv == m.value);
  if (!well_formed) return;
  readlist_[from] = Entry{m.pts, m.pv, m.ts, m.value};
  wave_ = wave_.with(from);
  if (auto v = decide()) {
    const int id = *pending_read_;
    pending_read_.reset();
    ctx.respond(id, *v);
    return;
  }
  // A full quorum answered without a decision: start a new wave.
  if (contains_member(wave_, quorums_)) {
    readlist_.clear();
    wave_ = {};
    ctx.send_all(ReadMsg{rid_});
  }
}

std::optional<std::string> DoubleWriteRegister::decide() const {
  std::set<std::pair<std::int64_t, std::string>, std::greater<>> candidates;
  for (const auto& [p, e] : readlist_) {
    candidates.emplace(e.pts, e.pv);
    candidates.emplace(e.ts, e.v);
  }
  for (const auto& [ts_star, v_star] : candidates) {
    ProcessSet reports;
    ProcessSet admits;
    for (const auto& [p, e] : readlist_) {
      const bool match = (e.pts == ts_star && e.pv == v_star) || (e.ts == ts_star && e.v == v_star);
      if (match) reports = reports.with(p);
      if (match || e.ts < ts_star) admits = admits.with(p);
    }
    if (contains_member(reports, core_sets_) && contains_member(admits, quorums_)) {
      return v_star;
    }
  }
  return std::nullopt;
}

}  // namespace asymq
