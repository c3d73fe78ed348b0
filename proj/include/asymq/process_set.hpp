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

#ifndef ASYMQ_PROCESS_SET_HPP_
#define ASYMQ_PROCESS_SET_HPP_

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace asymq {

/// Index of a process in the universe {0, ..., n-1}.
using ProcessId = int;

/// Largest supported universe; a ProcessSet is one machine word.
inline constexpr int kMaxProcesses = 64;

/**
 * A subset of the process universe, stored as a 64-bit mask.
 *
 * The universe size is not stored here; operations that need it
 * (complement, universe) take it as an argument. Sets compare in
 * canonical order: by cardinality first, then by mask value.
 */
class ProcessSet {
 public:
  constexpr ProcessSet() = default;
  constexpr explicit ProcessSet(std::uint64_t bits) : bits_(bits) {}

  ProcessSet(std::initializer_list<ProcessId> ids) {
    for (ProcessId p : ids) *this = with(p);
  }

  static constexpr ProcessSet universe(int n) {
    return ProcessSet(n >= 64 ? ~std::uint64_t{0}
                              : (std::uint64_t{1} << n) - 1);
  }

  static ProcessSet singleton(ProcessId p) { return ProcessSet().with(p); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }

  constexpr bool contains(ProcessId p) const {
    return p >= 0 && p < kMaxProcesses && ((bits_ >> p) & 1U) != 0;
  }
  constexpr bool subset_of(ProcessSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr bool intersects(ProcessSet other) const {
    return (bits_ & other.bits_) != 0;
  }

  ProcessSet with(ProcessId p) const {
    check_id(p);
    return ProcessSet(bits_ | (std::uint64_t{1} << p));
  }
  ProcessSet without(ProcessId p) const {
    check_id(p);
    return ProcessSet(bits_ & ~(std::uint64_t{1} << p));
  }

  constexpr ProcessSet complement(int n) const {
    return ProcessSet(~bits_ & universe(n).bits_);
  }

  /// Members in increasing index order.
  std::vector<ProcessId> members() const {
    std::vector<ProcessId> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(std::countr_zero(b));
    }
    return out;
  }

  friend constexpr ProcessSet operator|(ProcessSet a, ProcessSet b) {
    return ProcessSet(a.bits_ | b.bits_);
  }
  friend constexpr ProcessSet operator&(ProcessSet a, ProcessSet b) {
    return ProcessSet(a.bits_ & b.bits_);
  }
  /// Set difference.
  friend constexpr ProcessSet operator-(ProcessSet a, ProcessSet b) {
    return ProcessSet(a.bits_ & ~b.bits_);
  }

  friend constexpr bool operator==(ProcessSet a, ProcessSet b) = default;
  friend constexpr std::strong_ordering operator<=>(ProcessSet a,
                                                    ProcessSet b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  static void check_id(ProcessId p) {
    if (p < 0 || p >= kMaxProcesses) {
      throw std::out_of_range("process id out of range: " + std::to_string(p));
    }
  }

  std::uint64_t bits_ = 0;
};

/// Default display name of process `p`: "p1" for index 0.
std::string default_name(ProcessId p);

/// Renders a set as "{p1,p3}" using `names` (default names when empty).
std::string to_string(ProcessSet s, std::span<const std::string> names = {});

}  // namespace asymq

#endif  // ASYMQ_PROCESS_SET_HPP_
