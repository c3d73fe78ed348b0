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

#ifndef ASYMQ_SCENARIO_HPP_
#define ASYMQ_SCENARIO_HPP_

// Executable scenarios: a trust spec, a protocol, the faulty set with its
// Byzantine scripts, injected operations, a schedule and optional expected
// outcomes.
//
// {
//   "trust": "../configs/fb.json" | {inline trust spec},
//   "protocol": "auth-register" | "dw-register" | "consistent-bcast" | "reliable-bcast",
//   "writer" | "sender": "p4",
//   "instance": "b1",
//   "faulty": ["p4", "p5"],
//   "byzantine": {"p4": {script}},
//   "invocations": [{"id": 1, "process": "p1", "op": "write", "value": "x",
//                    "after": 0, "at_step": 0}],
//   "schedule": {"seed": 7, "policy": "random" | "global-fifo",
//                "script": [["p4", "p1"], ...],
//                "hold": [{"from": "p1", "to": "p3", "start_invoked": 2, "end_completed": 3}],
//                "hold_limit": 1000},
//   "steps": 100000,
//   "expect": {"deliveries": {"p1": "x", "p2": null}, "reads": {"3": "x"},
//              "safety_unscoped": "violated" | "holds",
//              "classification": {"p1": "Naive"}, "guild": ["p1"] | null,
//              "truncated": false}
// }

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymq/invariants.hpp"
#include "asymq/simnet.hpp"
#include "asymq/trust_config.hpp"

namespace asymq {

struct Scenario {
  TrustSpec trust;
  Protocol protocol = Protocol::kConsistentBcast;
  ProcessId origin = 0;
  std::optional<std::string> instance;
  ProcessSet faulty;
  std::map<ProcessId, nlohmann::json> byzantine;
  std::vector<Invocation> invocations;
  Schedule schedule;
  std::int64_t max_steps = 100000;
  nlohmann::json expect;  // null when absent
};

/// Throws ConfigError on malformed input. Relative trust paths resolve
/// against `base_dir`.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

/// Builds one machine per process and runs to quiescence or the step bound.
ExecutionTrace simulate(const Scenario& scenario);

struct RunResult {
  ExecutionTrace trace;
  CheckReport report;
  std::vector<std::string> expectation_failures;

  bool ok() const { return report.ok() && expectation_failures.empty(); }
};

RunResult run_scenario(const Scenario& scenario);

}  // namespace asymq

#endif  // ASYMQ_SCENARIO_HPP_
