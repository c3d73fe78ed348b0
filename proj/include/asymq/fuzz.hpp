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

#ifndef ASYMQ_FUZZ_HPP_
#define ASYMQ_FUZZ_HPP_

// Randomized runs: faulty sets, Byzantine scripts, injected operations and
// link holds are all drawn from a per-run seed, so run i of a campaign
// started at seed s is reproduced by a single run at seed s+i.

#include <cstdint>
#include <vector>

#include "asymq/scenario.hpp"

namespace asymq {

struct FuzzOptions {
  Protocol protocol = Protocol::kConsistentBcast;
  int runs = 100;
  std::uint64_t seed = 0;
  /// Half of the runs draw F outside every process's fail-prone closure.
  bool outside = false;
  std::int64_t max_steps = 20000;
  unsigned jobs = 1;
};

/// Deterministic function of (trust, protocol, seed, outside).
Scenario make_fuzz_scenario(const TrustSpec& trust, Protocol protocol, std::uint64_t seed,
                            bool outside, std::int64_t max_steps = 20000);

struct FuzzFailure {
  std::uint64_t seed = 0;
  std::vector<Violation> violations;
};

struct FuzzSummary {
  int runs = 0;
  int truncated = 0;
  int outside_runs = 0;
  std::vector<FuzzFailure> failures;

  bool ok() const { return failures.empty(); }
};

FuzzSummary fuzz(const TrustSpec& trust, const FuzzOptions& options);

}  // namespace asymq

#endif  // ASYMQ_FUZZ_HPP_
