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

#include <random>
#include <stdexcept>

#include "asymq/process_set.hpp"
#include "asymq/set_family.hpp"
#include "doctest.h"
#include "oracles.hpp"

using asymq::ProcessSet;
using asymq::SetFamily;

TEST_CASE("process set basics") {
  const ProcessSet a{0, 2, 3};
  CHECK(a.size() == 3);
  CHECK(a.contains(2));
  CHECK_FALSE(a.contains(1));
  CHECK_FALSE(a.contains(-1));
  CHECK_FALSE(a.contains(64));
  CHECK(a.members() == std::vector<asymq::ProcessId>{0, 2, 3});
  CHECK(a.with(1).size() == 4);
  CHECK(a.without(2) == ProcessSet{0, 3});
  CHECK(a.complement(5) == ProcessSet{1, 4});
  CHECK(ProcessSet::universe(64).size() == 64);
  CHECK(ProcessSet::universe(0).empty());
  CHECK(ProcessSet{0, 1}.subset_of(ProcessSet{0, 1, 2}));
  CHECK_FALSE(ProcessSet{0, 5}.subset_of(ProcessSet{0, 1, 2}));
  CHECK((ProcessSet{0, 1} & ProcessSet{1, 2}) == ProcessSet{1});
  CHECK((ProcessSet{0, 1} - ProcessSet{1, 2}) == ProcessSet{0});
  CHECK(ProcessSet{0, 1}.intersects(ProcessSet{1, 2}));
  CHECK_THROWS_AS(ProcessSet().with(64), std::out_of_range);
  CHECK_THROWS_AS(ProcessSet().with(-1), std::out_of_range);
}

TEST_CASE("canonical order is cardinality then mask") {
  CHECK(ProcessSet{5} < ProcessSet{0, 1});
  CHECK(ProcessSet{0, 2} < ProcessSet{1, 2});
  CHECK(ProcessSet{} < ProcessSet{0});
}

TEST_CASE("rendering") {
  CHECK(asymq::to_string(ProcessSet{0, 3}) == "{p1,p4}");
  const std::vector<std::string> names{"a", "b"};
  CHECK(asymq::to_string(ProcessSet{1}, names) == "{b}");
  CHECK(asymq::to_string(ProcessSet{}) == "{}");
  const SetFamily f(3, {ProcessSet{0}, ProcessSet{1, 2}});
  CHECK(asymq::to_string(f) == "{{p1},{p2,p3}}");
}

TEST_CASE("family normalization matches brute force") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    oracle::Fam raw;
    const int k = static_cast<int>(rng() % 7);
    for (int i = 0; i < k; ++i) raw.push_back(rng() & oracle::full(n));
    std::vector<ProcessSet> sets;
    for (oracle::Mask m : raw) sets.emplace_back(m);

    const SetFamily mx(n, sets);
    CHECK(oracle::masks(mx) == oracle::maximal(raw));
    const SetFamily mn = SetFamily::minimal(n, sets);
    CHECK(oracle::masks(mn) == oracle::minimal(raw));
    for (std::size_t i = 1; i < mx.size(); ++i) CHECK(mx[i - 1] < mx[i]);

    const ProcessSet probe(rng() & oracle::full(n));
    std::optional<ProcessSet> want;
    for (ProcessSet s : mx) {
      if (s.subset_of(probe)) {
        want = s;
        break;
      }
    }
    CHECK(asymq::find_contained(mx, probe) == want);
    ProcessSet support;
    for (oracle::Mask m : raw) support = support | ProcessSet(m);
    CHECK(mx.support() == support);
  }
}

TEST_CASE("family rejects sets outside the universe") {
  CHECK_THROWS_AS(SetFamily(2, {ProcessSet{3}}), std::invalid_argument);
}
