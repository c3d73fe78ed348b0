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

#ifndef ASYMQ_TRUST_CONFIG_HPP_
#define ASYMQ_TRUST_CONFIG_HPP_

// Trust assumption documents.
//
//   {
//     "processes": ["p1", "p2", ...],
//     "fail_prone": { "p1": <expr>, ... },
//     "quorums":    { "p1": <expr>, ... }      // optional
//   }
//
// <expr> is one of
//   [["p2","p4"], ["p5"]]                      explicit list of sets
//   {"theta": {"k": 1, "of": ["p2","p3"]}}     all k-subsets of "of"
//   {"star": [<expr>, <expr>, ...]}            pairwise unions, left fold
//
// Process names map to indices in declaration order. Omitted quorums
// default to the canonical complement of each fail-prone system. An empty
// fail-prone list means nothing fails for that process.

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "asymq/quorum_algebra.hpp"
#include "asymq/set_family.hpp"

namespace asymq {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrustSpec {
  std::vector<std::string> processes;
  AsymmetricFamily fail_prone;
  AsymmetricFamily quorums;
  bool explicit_quorums = false;

  int size() const { return static_cast<int>(processes.size()); }

  /// Throws ConfigError for unknown names.
  ProcessId index_of(std::string_view name) const;
  ProcessSet set_of(std::span<const std::string> names) const;

  std::string format(ProcessSet s) const { return to_string(s, processes); }
  std::string format(const SetFamily& f) const {
    return to_string(f, processes);
  }
};

/// Builds a spec from resolved families; quorums default to canonical.
TrustSpec make_trust_spec(std::vector<std::string> processes,
                          AsymmetricFamily fail_prone,
                          std::optional<AsymmetricFamily> quorums = {});

TrustSpec parse_trust_spec(const nlohmann::json& doc);
TrustSpec parse_trust_spec(std::string_view text);
TrustSpec load_trust_spec(const std::filesystem::path& path);

/// Resolves one <expr> against `processes`.
SetFamily parse_family_expr(const nlohmann::json& expr,
                            std::span<const std::string> processes);

/// Writes explicit set lists; quorums only when they were explicit.
nlohmann::json emit_trust_spec(const TrustSpec& spec);

struct SelfTrustWarning {
  ProcessId process = 0;
  ProcessSet fail_prone_set;
};

struct ValidationReport {
  B3Result b3;
  std::vector<bool> available;
  std::vector<SelfTrustWarning> self_trust;
  AsymBqsResult asym_bqs;
};

ValidationReport validate(const TrustSpec& spec);

}  // namespace asymq

#endif  // ASYMQ_TRUST_CONFIG_HPP_
