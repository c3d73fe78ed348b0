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
#include <set>

#include "asymq/quorum_algebra.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace asymq;
using oracle::Mask;

namespace {

int binomial(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

oracle::Fam fam_of(const SetFamily& f) { return oracle::as_fam(oracle::masks(f)); }

oracle::AFam afam_of(const AsymmetricFamily& ff) {
  oracle::AFam out;
  for (const SetFamily& f : ff) out.push_back(fam_of(f));
  return out;
}

}  // namespace

TEST_CASE("theta enumerates k-subsets of the base") {
  const ProcessSet base{0, 2, 3, 5, 6};
  for (int k = 0; k <= 5; ++k) {
    const SetFamily t = theta(7, k, base);
    CHECK(static_cast<int>(t.size()) == binomial(5, k));
    for (ProcessSet s : t) {
      CHECK(s.size() == k);
      CHECK(s.subset_of(base));
    }
  }
  CHECK_THROWS_AS(theta(4, 5, ProcessSet::universe(4)), std::invalid_argument);
}

TEST_CASE("star, closure and common fail-prone sets against brute force") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const oracle::AFam ab = oracle::random_afam(rng, n, 4, n - 1);
    const oracle::Fam a = oracle::as_fam(oracle::maximal(ab[0]));
    const oracle::Fam b = oracle::as_fam(oracle::maximal(ab[1]));
    const SetFamily la = oracle::to_lib(a, n);
    const SetFamily lb = oracle::to_lib(b, n);

    oracle::Fam unions;
    for (Mask x : a) {
      for (Mask y : b) unions.push_back(x | y);
    }
    CHECK(oracle::masks(star(la, lb)) == oracle::maximal(unions));

    oracle::Fam both;
    for (Mask x = 0; x <= oracle::full(n); ++x) {
      if (oracle::in_closure(a, x) && oracle::in_closure(b, x)) both.push_back(x);
      CHECK(downward_closure_contains(la, ProcessSet(x)) == oracle::in_closure(a, x));
    }
    CHECK(oracle::masks(common_fail_prone(la, lb)) == oracle::maximal(both));

    bool dom = true;
    for (Mask y : b) dom &= oracle::in_closure(a, y);
    CHECK(dominates(la, lb) == dom);

    bool q3 = true;
    for (Mask x : a) {
      for (Mask y : a) {
        for (Mask z : a) q3 &= (x | y | z) != oracle::full(n);
      }
    }
    CHECK(check_q3(la) == q3);
  }
}

TEST_CASE("b3 and asymmetric quorum system checks agree with brute force") {
  std::mt19937_64 rng(17);
  int holds = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const oracle::AFam raw = oracle::random_afam(rng, n);
    const AsymmetricFamily ff = oracle::to_lib(raw, n);
    const oracle::AFam norm = afam_of(ff);
    const AsymmetricFamily qq = canonical_quorums(ff);

    const B3Result b3 = check_b3(ff);
    CHECK(b3.holds() == oracle::b3(norm, n));
    holds += b3.holds() ? 1 : 0;
    if (!b3.holds()) {
      const B3Witness& w = *b3.violation;
      CHECK(ff[w.i].has(w.fi));
      CHECK(ff[w.j].has(w.fj));
      CHECK(oracle::in_closure(norm[static_cast<std::size_t>(w.i)], w.fij.bits()));
      CHECK(oracle::in_closure(norm[static_cast<std::size_t>(w.j)], w.fij.bits()));
      CHECK((w.fi | w.fj | w.fij) == ProcessSet::universe(n));
    }

    oracle::AFam canon;
    for (std::size_t i = 0; i < norm.size(); ++i) {
      canon.push_back(oracle::complements(norm[i], n));
      CHECK(oracle::masks(qq[static_cast<ProcessId>(i)]) == oracle::minimal(canon.back()));
    }

    const AsymBqsResult r = is_asym_bqs(qq, ff);
    CHECK(!r.consistency_violation == oracle::consistent(canon, norm, n));
    CHECK(!r.availability_violation == oracle::available(canon, norm));
    CHECK(r.holds() == b3.holds());
  }
  CHECK(holds > 10);
  CHECK(holds < 290);
}

TEST_CASE("symmetric quorum system check") {
  const SetFamily f = theta(4, 1, ProcessSet::universe(4));
  CHECK(is_bqs(theta(4, 3, ProcessSet::universe(4)), f));
  CHECK_FALSE(is_bqs(theta(4, 2, ProcessSet::universe(4)), f));
  CHECK_FALSE(is_bqs(SetFamily(4, {ProcessSet::universe(4)}), f));
  CHECK(is_available(canonical_quorums(f), f));
}

TEST_CASE("kernels and core sets against power-set enumeration") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    oracle::Fam raw;
    const int k = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < k; ++i) raw.push_back(rng() & oracle::full(n) & ~Mask{1});
    const SetFamily f = oracle::to_lib(raw, n);
    const oracle::Fam fm = fam_of(f);
    CHECK(oracle::masks(core_sets(f)) == oracle::core_sets(fm, n));

    const SetFamily q = SetFamily::minimal(n, std::vector<ProcessSet>(f.begin(), f.end()));
    if (!q.has(ProcessSet())) {
      CHECK(oracle::masks(kernels(q)) == oracle::kernels(fam_of(q), n));
    }
    CHECK(kernels(canonical_quorums(f)) == core_sets(f));
  }
  CHECK_THROWS_AS(kernels(SetFamily(3, {})), std::invalid_argument);
}

TEST_CASE("threshold systems") {
  for (int n = 1; n <= 9; ++n) {
    for (int f = 0; 3 * f < n; ++f) {
      const ThresholdSystem t = threshold_asym(n, f);
      const int qsize = (n + f + 2) / 2;
      const int ksize = (n - f + 1) / 2;
      for (ProcessId p = 0; p < n; ++p) {
        CHECK(t.quorums[p] == theta(n, qsize, ProcessSet::universe(n)));
        CHECK(kernels(t.quorums[p]) == theta(n, ksize, ProcessSet::universe(n)));
      }
      CHECK(check_b3(t.fail_prone).holds());
      CHECK(is_asym_bqs(t.quorums, t.fail_prone).holds());
    }
  }
  CHECK_FALSE(check_b3(threshold_asym(3, 1).fail_prone).holds());
  CHECK_THROWS_AS(threshold_asym(4, 4), std::invalid_argument);
}

TEST_CASE("classification and maximal guild against brute force") {
  std::mt19937_64 rng(29);
  int guilds = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const AsymmetricFamily ff = oracle::to_lib(oracle::random_afam(rng, n, 3, n - 1), n);
    const AsymmetricFamily qq = canonical_quorums(ff);
    const oracle::AFam fm = afam_of(ff);
    const oracle::AFam qm = afam_of(qq);
    const Mask faulty = rng() & oracle::full(n);

    const Classification c = classify(ff, ProcessSet(faulty));
    CHECK(c.wise().bits() == oracle::wise(fm, faulty));
    CHECK(c.faulty.bits() == faulty);
    CHECK((c.wise() | c.naive() | c.faulty) == ProcessSet::universe(n));

    const auto g = maximal_guild(qq, ff, ProcessSet(faulty));
    const auto want = oracle::max_guild(qm, fm, faulty);
    CHECK(g.has_value() == want.has_value());
    if (g && want) {
      CHECK(g->bits() == *want);
      CHECK(is_guild(*g, qq, ff, ProcessSet(faulty)));
      ++guilds;
    }
  }
  CHECK(guilds > 0);
}
