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

#ifndef ASYMQ_REGISTER_PROTOCOLS_HPP_
#define ASYMQ_REGISTER_PROTOCOLS_HPP_

// Single-writer regular register emulations over asymmetric quorums:
// a signed variant and an unauthenticated double-write variant. Any
// process may read; only the designated writer may write.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "asymq/set_family.hpp"
#include "asymq/simnet.hpp"

namespace asymq {

/// Value of the imaginary initial write at timestamp 0.
inline const std::string kInitialValue;

/// Value of the pair with the greatest (ts, value). Throws
/// std::invalid_argument on empty input.
std::string highestval(std::span<const std::pair<std::int64_t, std::string>> pairs);

/// Writer's signature on the initial pair (0, kInitialValue).
Signature genesis_signature(SignatureRegistry& registry, ProcessId writer);

class AuthRegister : public Process {
 public:
  AuthRegister(ProcessId writer, SetFamily quorums, Signature genesis);

  void on_start(Context& ctx) override;
  void on_invoke(const Invocation& inv, Context& ctx) override;
  void on_message(ProcessId from, const Message& msg, Context& ctx) override;

  std::int64_t ts() const { return ts_; }
  const std::string& value() const { return v_; }

 private:
  ProcessId writer_;
  SetFamily quorums_;
  // stored triple
  std::int64_t ts_ = 0;
  std::string v_ = kInitialValue;
  Signature sig_;
  // writer
  std::int64_t wts_ = 0;
  std::optional<int> pending_write_;
  ProcessSet acks_;
  // reader
  std::int64_t rid_ = 0;
  std::optional<int> pending_read_;
  std::map<ProcessId, std::pair<std::int64_t, std::string>> replies_;
};

class DoubleWriteRegister : public Process {
 public:
  DoubleWriteRegister(ProcessId writer, SetFamily quorums, SetFamily core_sets);

  void on_start(Context& ctx) override;
  void on_invoke(const Invocation& inv, Context& ctx) override;
  void on_message(ProcessId from, const Message& msg, Context& ctx) override;

  struct Entry {
    std::int64_t pts = 0;
    std::string pv;
    std::int64_t ts = 0;
    std::string v;
  };

 private:
  enum class Phase { kIdle, kPreWrite, kWrite };

  void on_value(ProcessId from, const DwValueMsg& m, Context& ctx);
  std::optional<std::string> decide() const;

  ProcessId writer_;
  SetFamily quorums_;
  SetFamily core_sets_;
  std::int64_t pts_ = 0;
  std::string pv_ = kInitialValue;
  std::int64_t ts_ = 0;
  std::string v_ = kInitialValue;
  // writer
  std::int64_t wts_ = 0;
  std::string wv_;
  Phase phase_ = Phase::kIdle;
  std::optional<int> pending_write_;
  ProcessSet acks_;
  // reader
  std::int64_t rid_ = 0;
  std::optional<int> pending_read_;
  std::map<ProcessId, Entry> readlist_;
  ProcessSet wave_;
};

}  // namespace asymq

#endif  // ASYMQ_REGISTER_PROTOCOLS_HPP_
