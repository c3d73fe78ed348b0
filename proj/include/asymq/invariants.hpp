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

#ifndef ASYMQ_INVARIANTS_HPP_
#define ASYMQ_INVARIANTS_HPP_

// Trace checkers. Each property is scoped to the processes the definitions
// cover (wise processes, members of the maximal guild); properties of naive
// endpoints are reported as diagnostics, never as violations.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asymq/quorum_algebra.hpp"
#include "asymq/simnet.hpp"

namespace asymq {

enum class Protocol { kAuthRegister, kDwRegister, kConsistentBcast, kReliableBcast };

const char* to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);
inline bool is_register(Protocol p) {
  return p == Protocol::kAuthRegister || p == Protocol::kDwRegister;
}

struct CheckContext {
  Protocol protocol = Protocol::kConsistentBcast;
  ProcessId origin = 0;  // writer or sender
  ProcessSet faulty;
  Classification classification;
  std::optional<ProcessSet> guild;
};

CheckContext make_check_context(Protocol protocol, ProcessId origin,
                                const AsymmetricFamily& quorums,
                                const AsymmetricFamily& fail_prone, ProcessSet faulty);

struct Violation {
  std::string invariant;
  std::string detail;
};

struct CheckReport {
  std::vector<Violation> violations;
  /// Regular-register safety evaluated for every reader and writer.
  bool safety_unscoped_violated = false;
  /// Wise processes outside the maximal guild that delivered.
  ProcessSet wise_outside_guild_delivered;

  bool ok() const { return violations.empty(); }
};

/// FIFO, no duplication, no spoofing, payload integrity, fairness.
void check_well_formed(const ExecutionTrace& trace, const CheckContext& ctx, CheckReport& out);
void check_broadcast(const ExecutionTrace& trace, const CheckContext& ctx, CheckReport& out);
void check_register(const ExecutionTrace& trace, const CheckContext& ctx, CheckReport& out);

/// Runs every checker applicable to `ctx.protocol`.
CheckReport check_trace(const ExecutionTrace& trace, const CheckContext& ctx);

/// First delivery per process ("c-deliver" / "r-deliver" outputs).
std::map<ProcessId, std::string> deliveries(const ExecutionTrace& trace);
/// Returned value per completed read invocation id.
std::map<int, std::string> read_results(const ExecutionTrace& trace);

}  // namespace asymq

#endif  // ASYMQ_INVARIANTS_HPP_
