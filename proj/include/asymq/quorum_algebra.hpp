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

#ifndef ASYMQ_QUORUM_ALGEBRA_HPP_
#define ASYMQ_QUORUM_ALGEBRA_HPP_

// Combinatorics of symmetric and asymmetric Byzantine quorum systems.
//
// All functions are pure. Families passed together must share a universe
// size; mismatches throw std::invalid_argument.

#include <optional>
#include <vector>

#include "asymq/process_set.hpp"
#include "asymq/set_family.hpp"

namespace asymq {

/// All `k`-element subsets of `base`.
SetFamily theta(int universe_size, int k, ProcessSet base);

/// Pairwise unions {A | B : A in a, B in b}, normalized to maximal sets.
SetFamily star(const SetFamily& a, const SetFamily& b);

SetFamily normalize_antichain(int universe_size, std::vector<ProcessSet> sets);

/// True iff every member of `s` is contained in some member of `t`.
bool dominates(const SetFamily& t, const SetFamily& s);

/// True iff `x` lies in the downward closure of `f`.
bool downward_closure_contains(const SetFamily& f, ProcessSet x);

/// Maximal elements of the intersection of the downward closures of `a`
/// and `b`. Every set in both closures is below one of these.
SetFamily common_fail_prone(const SetFamily& a, const SetFamily& b);

/// No three members of `f` cover the universe.
bool check_q3(const SetFamily& f);

struct B3Witness {
  ProcessId i = 0;
  ProcessId j = 0;
  ProcessSet fi;
  ProcessSet fj;
  ProcessSet fij;
};

struct B3Result {
  std::optional<B3Witness> violation;
  bool holds() const { return !violation; }
};

/// Checks the asymmetric three-set covering condition. On failure the
/// witness is the first covering triple in (i, j, F_i, F_j, F_ij) order.
B3Result check_b3(const AsymmetricFamily& ff);

/// Bijective complement {P \ F : F in f}.
SetFamily canonical_quorums(const SetFamily& f);
AsymmetricFamily canonical_quorums(const AsymmetricFamily& ff);

/// Symmetric Byzantine quorum system check (consistency and availability).
bool is_bqs(const SetFamily& q, const SetFamily& f);

struct ConsistencyWitness {
  ProcessId i = 0;
  ProcessId j = 0;
  ProcessSet qi;
  ProcessSet qj;
  ProcessSet fij;
};

struct AvailabilityWitness {
  ProcessId i = 0;
  ProcessSet fi;
};

struct AsymBqsResult {
  std::optional<ConsistencyWitness> consistency_violation;
  std::optional<AvailabilityWitness> availability_violation;
  bool holds() const {
    return !consistency_violation && !availability_violation;
  }
};

AsymBqsResult is_asym_bqs(const AsymmetricFamily& qq,
                          const AsymmetricFamily& ff);

/// Per-process availability: every F in ff[i] misses some quorum of i.
bool is_available(const SetFamily& q, const SetFamily& f);

/// All minimal sets that intersect every member of `q`.
/// Throws std::invalid_argument when `q` is empty.
SetFamily kernels(const SetFamily& q);
AsymmetricFamily kernels(const AsymmetricFamily& qq);

/// All minimal sets contained in no member of `f`.
SetFamily core_sets(const SetFamily& f);
AsymmetricFamily core_sets(const AsymmetricFamily& ff);

enum class ProcessKind { kFaulty, kNaive, kWise };

const char* to_string(ProcessKind k);

struct Classification {
  std::vector<ProcessKind> kinds;
  ProcessSet faulty;

  ProcessSet wise() const { return of_kind(ProcessKind::kWise); }
  ProcessSet naive() const { return of_kind(ProcessKind::kNaive); }
  ProcessSet of_kind(ProcessKind k) const;
};

Classification classify(const AsymmetricFamily& ff, ProcessSet actual_faulty);

bool is_guild(ProcessSet g, const AsymmetricFamily& qq,
              const AsymmetricFamily& ff, ProcessSet actual_faulty);

/// Greatest fixpoint of "wise members with a quorum inside the set";
/// empty when no guild exists.
std::optional<ProcessSet> maximal_guild(const AsymmetricFamily& qq,
                                        const AsymmetricFamily& ff,
                                        ProcessSet actual_faulty);

struct ThresholdSystem {
  AsymmetricFamily fail_prone;
  AsymmetricFamily quorums;
};

/// Symmetric threshold trust written as an asymmetric system: every
/// process tolerates any `f` failures and uses quorums of
/// ceil((n+f+1)/2) processes.
ThresholdSystem threshold_asym(int n, int f);

}  // namespace asymq

#endif  // ASYMQ_QUORUM_ALGEBRA_HPP_
