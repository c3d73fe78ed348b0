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

#ifndef ASYMQ_BROADCAST_PROTOCOLS_HPP_
#define ASYMQ_BROADCAST_PROTOCOLS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asymq/set_family.hpp"
#include "asymq/simnet.hpp"

namespace asymq {

/// Per-sender record of received payloads; nullopt is "nothing yet".
using SenderMap = std::vector<std::optional<std::string>>;

/// Smallest payload m (in string order) whose senders contain a member of
/// `family`.
std::optional<std::string> first_hit(const SenderMap& received, const SetFamily& family);

inline std::optional<std::string> kernel_hit(const SenderMap& readys, const SetFamily& kernels) {
  return first_hit(readys, kernels);
}

inline std::optional<std::string> quorum_hit(const SenderMap& received, const SetFamily& quorums) {
  return first_hit(received, quorums);
}

/// Echo-based consistent broadcast for one instance with a fixed sender.
class ConsistentBroadcast : public Process {
 public:
  ConsistentBroadcast(ProcessId sender, SetFamily quorums);

  void on_invoke(const Invocation& inv, Context& ctx) override;
  void on_message(ProcessId from, const Message& msg, Context& ctx) override;

 protected:
  void on_send(ProcessId from, const SendMsg& m, Context& ctx);
  void on_echo(ProcessId from, const EchoMsg& m);

  ProcessId sender_;
  SetFamily quorums_;
  bool sentecho_ = false;
  bool delivered_ = false;
  SenderMap echos_;
};

/// Consistent broadcast plus a READY round with kernel amplification.
class ReliableBroadcast : public ConsistentBroadcast {
 public:
  ReliableBroadcast(ProcessId sender, SetFamily quorums, SetFamily kernels);

  void on_message(ProcessId from, const Message& msg, Context& ctx) override;

 private:
  void evaluate(Context& ctx);

  SetFamily kernels_;
  bool sentready_ = false;
  SenderMap readys_;
};

}  // namespace asymq

#endif  // ASYMQ_BROADCAST_PROTOCOLS_HPP_
