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

#ifndef ASYMQ_SET_FAMILY_HPP_
#define ASYMQ_SET_FAMILY_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asymq/process_set.hpp"

namespace asymq {

/**
 * An antichain of process sets over a universe of `universe_size()`
 * processes. Fail-prone systems, quorum systems, kernel systems and core
 * set systems all share this shape.
 *
 * Members are kept sorted in canonical ProcessSet order, so iteration and
 * witnesses are reproducible.
 */
class SetFamily {
 public:
  SetFamily() = default;

  /// Keeps the maximal elements of `sets` (fail-prone convention).
  SetFamily(int universe_size, std::vector<ProcessSet> sets);

  /// Keeps the minimal elements of `sets`. Used for upward-closed
  /// families (quorums, kernels, core sets), where a superset of a member
  /// carries no extra information.
  static SetFamily minimal(int universe_size, std::vector<ProcessSet> sets);

  int universe_size() const { return n_; }
  std::span<const ProcessSet> sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  auto begin() const { return sets_.begin(); }
  auto end() const { return sets_.end(); }
  const ProcessSet& operator[](std::size_t i) const { return sets_[i]; }

  /// Exact membership (not closure membership).
  bool has(ProcessSet s) const;

  /// Union of all members.
  ProcessSet support() const;

  friend bool operator==(const SetFamily&, const SetFamily&) = default;

 private:
  struct Sorted {};
  SetFamily(Sorted, int n, std::vector<ProcessSet> sets)
      : n_(n), sets_(std::move(sets)) {}

  int n_ = 0;
  std::vector<ProcessSet> sets_;
};

/// The first member of `family` contained in `s`, in canonical order.
std::optional<ProcessSet> find_contained(const SetFamily& family,
                                         ProcessSet s);

/// True iff `s` contains some member of `family`.
inline bool contains_member(ProcessSet s, const SetFamily& family) {
  return find_contained(family, s).has_value();
}

/// One SetFamily per process: entry i is process i's fail-prone system,
/// quorum system, kernel system or core set system.
class AsymmetricFamily {
 public:
  AsymmetricFamily() = default;
  explicit AsymmetricFamily(std::vector<SetFamily> per_process);

  int universe_size() const {
    return per_process_.empty() ? 0 : per_process_.front().universe_size();
  }
  std::size_t size() const { return per_process_.size(); }
  const SetFamily& operator[](ProcessId i) const {
    return per_process_.at(static_cast<std::size_t>(i));
  }
  auto begin() const { return per_process_.begin(); }
  auto end() const { return per_process_.end(); }

  friend bool operator==(const AsymmetricFamily&,
                         const AsymmetricFamily&) = default;

 private:
  std::vector<SetFamily> per_process_;
};

/// Renders "{{p1},{p2,p3}}".
std::string to_string(const SetFamily& f,
                      std::span<const std::string> names = {});

}  // namespace asymq

#endif  // ASYMQ_SET_FAMILY_HPP_
