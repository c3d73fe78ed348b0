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

#include "asymq/set_family.hpp"

#include <algorithm>
#include <stdexcept>

namespace asymq {

namespace {

void check_universe(int n, const std::vector<ProcessSet>& sets) {
  if (n < 0 || n > kMaxProcesses) {
    throw std::invalid_argument("universe size out of range: " +
                                std::to_string(n));
  }
  const ProcessSet all = ProcessSet::universe(n);
  for (ProcessSet s : sets) {
    if (!s.subset_of(all)) {
      throw std::invalid_argument("set " + to_string(s) +
                                  " exceeds universe of size " +
                                  std::to_string(n));
    }
  }
}

std::vector<ProcessSet> sorted_unique(std::vector<ProcessSet> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

}  // namespace

std::string default_name(ProcessId p) { return "p" + std::to_string(p + 1); }

std::string to_string(ProcessSet s, std::span<const std::string> names) {
  std::string out = "{";
  bool first = true;
  for (ProcessId p : s.members()) {
    if (!first) out += ',';
    first = false;
    out += static_cast<std::size_t>(p) < names.size()
               ? names[static_cast<std::size_t>(p)]
               : default_name(p);
  }
  return out + "}";
}

SetFamily::SetFamily(int universe_size, std::vector<ProcessSet> sets)
    : n_(universe_size) {
  check_universe(universe_size, sets);
  sets = sorted_unique(std::move(sets));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool absorbed = false;
    // Only later (not smaller) sets can strictly contain sets[i].
    for (std::size_t j = i + 1; j < sets.size() && !absorbed; ++j) {
      absorbed = sets[i].subset_of(sets[j]);
    }
    if (!absorbed) sets_.push_back(sets[i]);
  }
}

SetFamily SetFamily::minimal(int universe_size, std::vector<ProcessSet> sets) {
  check_universe(universe_size, sets);
  sets = sorted_unique(std::move(sets));
  std::vector<ProcessSet> kept;
  for (ProcessSet s : sets) {
    const bool absorbed = std::any_of(kept.begin(), kept.end(), [&](auto k) {
      return k.subset_of(s);
    });
    if (!absorbed) kept.push_back(s);
  }
  return SetFamily(Sorted{}, universe_size, std::move(kept));
}

bool SetFamily::has(ProcessSet s) const {
  return std::binary_search(sets_.begin(), sets_.end(), s);
}

ProcessSet SetFamily::support() const {
  ProcessSet out;
  for (ProcessSet s : sets_) out = out | s;
  return out;
}

std::optional<ProcessSet> find_contained(const SetFamily& family,
                                         ProcessSet s) {
  for (ProcessSet m : family) {
    if (m.subset_of(s)) return m;
  }
  return std::nullopt;
}

AsymmetricFamily::AsymmetricFamily(std::vector<SetFamily> per_process)
    : per_process_(std::move(per_process)) {
  const int n = static_cast<int>(per_process_.size());
  for (const SetFamily& f : per_process_) {
    if (f.universe_size() != n) {
      throw std::invalid_argument(
          "asymmetric family entry has universe size " +
          std::to_string(f.universe_size()) + ", expected " +
          std::to_string(n));
    }
  }
}

std::string to_string(const SetFamily& f, std::span<const std::string> names) {
  std::string out = "{";
  bool first = true;
  for (ProcessSet s : f) {
    if (!first) out += ',';
    first = false;
    out += to_string(s, names);
  }
  return out + "}";
}

}  // namespace asymq
