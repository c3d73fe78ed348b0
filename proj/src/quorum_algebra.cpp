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

#include "asymq/quorum_algebra.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace asymq {

namespace {

void require_same_universe(const SetFamily& a, const SetFamily& b) {
  if (a.universe_size() != b.universe_size()) {
    throw std::invalid_argument("set families over different universes (" +
                                std::to_string(a.universe_size()) + " vs " +
                                std::to_string(b.universe_size()) + ")");
  }
}

void require_same_shape(const AsymmetricFamily& a, const AsymmetricFamily& b) {
  if (a.size() != b.size() || a.universe_size() != b.universe_size()) {
    throw std::invalid_argument("asymmetric families of different shape");
  }
}

// Calls fn(subset) for every k-element subset of base, in lexicographic
// order of member indices.
template <class Fn>
void for_each_subset_of_size(ProcessSet base, int k, Fn&& fn) {
  const std::vector<ProcessId> members = base.members();
  const int m = static_cast<int>(members.size());
  if (k < 0 || k > m) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    ProcessSet s;
    for (int i : idx) s = s.with(members[static_cast<std::size_t>(i)]);
    fn(s);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

// Minimal hitting sets, searched by increasing cardinality over the
// support of `family`. A candidate containing an already found hitter is
// skipped, so every hitter found is minimal.
SetFamily minimal_hitting_sets(const SetFamily& family) {
  const int n = family.universe_size();
  if (family.empty()) return SetFamily::minimal(n, {ProcessSet{}});
  if (family.has(ProcessSet{})) return SetFamily::minimal(n, {});

  const ProcessSet support = family.support();
  // Each member of a minimal hitter is needed for a distinct set.
  const int max_k = std::min(support.size(), static_cast<int>(family.size()));
  std::vector<ProcessSet> found;
  for (int k = 1; k <= max_k; ++k) {
    for_each_subset_of_size(support, k, [&](ProcessSet c) {
      for (ProcessSet h : found) {
        if (h.subset_of(c)) return;
      }
      for (ProcessSet s : family) {
        if (!c.intersects(s)) return;
      }
      found.push_back(c);
    });
  }
  return SetFamily::minimal(n, std::move(found));
}

}  // namespace

SetFamily theta(int universe_size, int k, ProcessSet base) {
  if (k < 0 || k > base.size()) {
    throw std::invalid_argument("theta: k=" + std::to_string(k) +
                                " out of range for a set of " +
                                std::to_string(base.size()));
  }
  std::vector<ProcessSet> out;
  for_each_subset_of_size(base, k, [&](ProcessSet s) { out.push_back(s); });
  return SetFamily(universe_size, std::move(out));
}

SetFamily star(const SetFamily& a, const SetFamily& b) {
  require_same_universe(a, b);
  std::vector<ProcessSet> out;
  out.reserve(a.size() * b.size());
  for (ProcessSet x : a) {
    for (ProcessSet y : b) out.push_back(x | y);
  }
  return SetFamily(a.universe_size(), std::move(out));
}

SetFamily normalize_antichain(int universe_size, std::vector<ProcessSet> sets) {
  return SetFamily(universe_size, std::move(sets));
}

bool dominates(const SetFamily& t, const SetFamily& s) {
  require_same_universe(t, s);
  return std::all_of(s.begin(), s.end(), [&](ProcessSet x) {
    return downward_closure_contains(t, x);
  });
}

bool downward_closure_contains(const SetFamily& f, ProcessSet x) {
  return std::any_of(f.begin(), f.end(),
                     [&](ProcessSet a) { return x.subset_of(a); });
}

SetFamily common_fail_prone(const SetFamily& a, const SetFamily& b) {
  require_same_universe(a, b);
  std::vector<ProcessSet> meets;
  for (ProcessSet x : a) {
    for (ProcessSet y : b) meets.push_back(x & y);
  }
  return SetFamily(a.universe_size(), std::move(meets));
}

bool check_q3(const SetFamily& f) {
  const ProcessSet all = ProcessSet::universe(f.universe_size());
  const auto sets = f.sets();
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = a; b < sets.size(); ++b) {
      for (std::size_t c = b; c < sets.size(); ++c) {
        if ((sets[a] | sets[b] | sets[c]) == all) return false;
      }
    }
  }
  return true;
}

B3Result check_b3(const AsymmetricFamily& ff) {
  const int n = static_cast<int>(ff.size());
  const ProcessSet all = ProcessSet::universe(n);
  for (ProcessId i = 0; i < n; ++i) {
    for (ProcessId j = i; j < n; ++j) {
      const SetFamily shared = common_fail_prone(ff[i], ff[j]);
      for (ProcessSet fi : ff[i]) {
        for (ProcessSet fj : ff[j]) {
          for (ProcessSet fij : shared) {
            if ((fi | fj | fij) == all) {
              return B3Result{B3Witness{i, j, fi, fj, fij}};
            }
          }
        }
      }
    }
  }
  return {};
}

SetFamily canonical_quorums(const SetFamily& f) {
  std::vector<ProcessSet> out;
  out.reserve(f.size());
  for (ProcessSet s : f) out.push_back(s.complement(f.universe_size()));
  return SetFamily::minimal(f.universe_size(), std::move(out));
}

AsymmetricFamily canonical_quorums(const AsymmetricFamily& ff) {
  std::vector<SetFamily> out;
  out.reserve(ff.size());
  for (const SetFamily& f : ff) out.push_back(canonical_quorums(f));
  return AsymmetricFamily(std::move(out));
}

bool is_available(const SetFamily& q, const SetFamily& f) {
  return std::all_of(f.begin(), f.end(), [&](ProcessSet bad) {
    return std::any_of(q.begin(), q.end(),
                       [&](ProcessSet good) { return !good.intersects(bad); });
  });
}

bool is_bqs(const SetFamily& q, const SetFamily& f) {
  require_same_universe(q, f);
  for (ProcessSet q1 : q) {
    for (ProcessSet q2 : q) {
      if (downward_closure_contains(f, q1 & q2)) return false;
    }
  }
  return is_available(q, f);
}

AsymBqsResult is_asym_bqs(const AsymmetricFamily& qq,
                          const AsymmetricFamily& ff) {
  require_same_shape(qq, ff);
  const int n = static_cast<int>(ff.size());
  auto find_consistency_violation = [&]() -> std::optional<ConsistencyWitness> {
    for (ProcessId i = 0; i < n; ++i) {
      for (ProcessId j = i; j < n; ++j) {
        const SetFamily shared = common_fail_prone(ff[i], ff[j]);
        for (ProcessSet qi : qq[i]) {
          for (ProcessSet qj : qq[j]) {
            for (ProcessSet fij : shared) {
              if ((qi & qj).subset_of(fij)) {
                return ConsistencyWitness{i, j, qi, qj, fij};
              }
            }
          }
        }
      }
    }
    return std::nullopt;
  };

  AsymBqsResult result;
  result.consistency_violation = find_consistency_violation();
  for (ProcessId i = 0; i < n && !result.availability_violation; ++i) {
    for (ProcessSet fi : ff[i]) {
      if (!is_available(qq[i], SetFamily(n, {fi}))) {
        result.availability_violation = AvailabilityWitness{i, fi};
        break;
      }
    }
  }
  return result;
}

SetFamily kernels(const SetFamily& q) {
  if (q.empty()) throw std::invalid_argument("kernels: empty quorum system");
  return minimal_hitting_sets(q);
}

AsymmetricFamily kernels(const AsymmetricFamily& qq) {
  std::vector<SetFamily> out;
  out.reserve(qq.size());
  for (const SetFamily& q : qq) out.push_back(kernels(q));
  return AsymmetricFamily(std::move(out));
}

SetFamily core_sets(const SetFamily& f) {
  // C is contained in no F exactly when C meets every complement P \ F.
  std::vector<ProcessSet> complements;
  complements.reserve(f.size());
  for (ProcessSet s : f) complements.push_back(s.complement(f.universe_size()));
  return minimal_hitting_sets(
      SetFamily::minimal(f.universe_size(), std::move(complements)));
}

AsymmetricFamily core_sets(const AsymmetricFamily& ff) {
  std::vector<SetFamily> out;
  out.reserve(ff.size());
  for (const SetFamily& f : ff) out.push_back(core_sets(f));
  return AsymmetricFamily(std::move(out));
}

const char* to_string(ProcessKind k) {
  switch (k) {
    case ProcessKind::kFaulty: return "Faulty";
    case ProcessKind::kNaive: return "Naive";
    case ProcessKind::kWise: return "Wise";
  }
  return "?";
}

ProcessSet Classification::of_kind(ProcessKind k) const {
  ProcessSet out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i] == k) out = out.with(static_cast<ProcessId>(i));
  }
  return out;
}

Classification classify(const AsymmetricFamily& ff, ProcessSet actual_faulty) {
  Classification c;
  c.faulty = actual_faulty;
  c.kinds.reserve(ff.size());
  for (ProcessId i = 0; i < static_cast<ProcessId>(ff.size()); ++i) {
    if (actual_faulty.contains(i)) {
      c.kinds.push_back(ProcessKind::kFaulty);
    } else if (downward_closure_contains(ff[i], actual_faulty)) {
      c.kinds.push_back(ProcessKind::kWise);
    } else {
      c.kinds.push_back(ProcessKind::kNaive);
    }
  }
  return c;
}

bool is_guild(ProcessSet g, const AsymmetricFamily& qq,
              const AsymmetricFamily& ff, ProcessSet actual_faulty) {
  require_same_shape(qq, ff);
  if (g.empty()) return false;
  const ProcessSet wise = classify(ff, actual_faulty).wise();
  if (!g.subset_of(wise)) return false;
  for (ProcessId p : g.members()) {
    if (!contains_member(g, qq[p])) return false;
  }
  return true;
}

std::optional<ProcessSet> maximal_guild(const AsymmetricFamily& qq,
                                        const AsymmetricFamily& ff,
                                        ProcessSet actual_faulty) {
  require_same_shape(qq, ff);
  ProcessSet g = classify(ff, actual_faulty).wise();
  for (bool changed = true; changed;) {
    changed = false;
    for (ProcessId p : g.members()) {
      if (!contains_member(g, qq[p])) {
        g = g.without(p);
        changed = true;
      }
    }
  }
  if (g.empty()) return std::nullopt;
  return g;
}

ThresholdSystem threshold_asym(int n, int f) {
  if (n < 1 || n > kMaxProcesses) {
    throw std::invalid_argument("threshold_asym: n out of range");
  }
  if (f < 0 || f >= n) {
    throw std::invalid_argument("threshold_asym: need 0 <= f < n");
  }
  const ProcessSet all = ProcessSet::universe(n);
  const int quorum_size = (n + f + 2) / 2;  // ceil((n+f+1)/2)
  const SetFamily fail_prone = theta(n, f, all);
  const SetFamily quorums = theta(n, quorum_size, all);
  return ThresholdSystem{
      AsymmetricFamily(std::vector<SetFamily>(static_cast<std::size_t>(n), fail_prone)),
      AsymmetricFamily(std::vector<SetFamily>(static_cast<std::size_t>(n), quorums)),
  };
}

}  // namespace asymq
