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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "asymq/fuzz.hpp"
#include "asymq/quorum_algebra.hpp"
#include "asymq/scenario.hpp"
#include "asymq/trust_config.hpp"
#include "oracles.hpp"

using namespace asymq;
using Kind = TraceRecord::Kind;

namespace {

const std::string kRoot = ASYMQ_SOURCE_DIR;
const std::string kCli = ASYMQ_CLI;

struct Outcome {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Cmd {
  int status = -1;
  std::string out;
};

Cmd cli(const std::string& args) {
  Cmd c;
  const std::string cmd = "'" + kCli + "' " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return c;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) c.out.append(buf, got);
  const int raw = pclose(pipe);
  c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return c;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SetFamily family(int n, std::initializer_list<std::initializer_list<int>> sets) {
  std::vector<ProcessSet> out;
  for (const auto& s : sets) {
    ProcessSet p;
    for (int id : s) p = p.with(id - 1);
    out.push_back(p);
  }
  return SetFamily(n, out);
}

std::string cfg(const char* name) { return kRoot + "/configs/" + name; }
std::string scenario(const char* name) { return kRoot + "/scenarios/" + std::string(name) + ".json"; }
std::string golden(const char* name) {
  return kRoot + "/scenarios/golden/" + std::string(name) + ".jsonl";
}

struct Found {
  std::string spec;
  Protocol protocol;
  std::uint64_t seed;
  std::vector<Violation> violations;
};

void time_limit(Outcome& o, std::chrono::steady_clock::time_point t0, double limit) {
  const double s = seconds_since(t0);
  std::ostringstream msg;
  msg << "took " << s << " s (limit " << limit << " s)";
  o.require(s < limit, msg.str());
  o.notes.push_back(msg.str());
}

Outcome ac1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const TrustSpec fa = load_trust_spec(cfg("fa.json"));
  o.require(fa.size() == 5, "five processes");
  if (fa.size() == 5) {
    o.require(fa.fail_prone[0] == family(5, {{2}, {3}, {4}, {5}}), "F1");
    o.require(fa.fail_prone[1] == family(5, {{1}, {3}, {4}, {5}}), "F2");
    o.require(fa.fail_prone[2] == family(5, {{1, 4}, {1, 5}, {2, 4}, {2, 5}}), "F3");
    o.require(fa.fail_prone[3] == family(5, {{1}, {2}, {3}, {5}}), "F4");
    o.require(fa.fail_prone[4] == family(5, {{2, 4}}), "F5");
  }
  const Cmd check = cli("check '" + cfg("fa.json") + "'");
  o.require(check.status == 0 && contains(check.out, "B3: OK"), "check fa.json reports B3: OK");
  const Cmd cls = cli("classify '" + cfg("fa.json") + "' --faulty p2,p4");
  o.require(cls.status == 0, "classify exit status");
  o.require(contains(cls.out, "p1 Naive"), "p1 Naive");
  o.require(contains(cls.out, "p3 Wise"), "p3 Wise");
  o.require(contains(cls.out, "p5 Wise"), "p5 Wise");
  time_limit(o, t0, 1.0);
  return o;
}

Outcome ac2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const TrustSpec fb = load_trust_spec(cfg("fb.json"));
  const B3Result b3 = check_b3(fb.fail_prone);
  if (!b3.holds()) {
    const B3Witness& w = *b3.violation;
    o.failures.push_back("B3 holds: violated by i=" + fb.processes[static_cast<std::size_t>(w.i)] +
                         " j=" + fb.processes[static_cast<std::size_t>(w.j)] +
                         " Fi=" + fb.format(w.fi) + " Fj=" + fb.format(w.fj) +
                         " Fij=" + fb.format(w.fij));
  }
  const Cmd check = cli("check '" + cfg("fb.json") + "'");
  o.require(contains(check.out, "B3: OK"),
            "check fb.json should report B3: OK, exited " + std::to_string(check.status));

  const AsymmetricFamily kk = kernels(fb.quorums);
  const SetFamily want[] = {family(6, {{1}, {3}}), family(6, {{1}, {2}}), family(6, {{2}, {3}})};
  for (ProcessId p = 0; p < 3; ++p) {
    if (kk[p] != want[p]) {
      o.failures.push_back("K" + std::to_string(p + 1) + " = " + fb.format(kk[p]) + ", expected " +
                           fb.format(want[p]));
    }
  }
  const auto g45 = maximal_guild(fb.quorums, fb.fail_prone, fb.set_of(std::vector<std::string>{"p4", "p5"}));
  o.require(g45 && *g45 == fb.set_of(std::vector<std::string>{"p1", "p2", "p3"}),
            "guild {p1,p2,p3} for F={p4,p5}");
  const auto g15 = maximal_guild(fb.quorums, fb.fail_prone, fb.set_of(std::vector<std::string>{"p1", "p5"}));
  o.require(!g15, "no guild for F={p1,p5}");
  const Cmd c45 = cli("classify '" + cfg("fb.json") + "' --faulty p4,p5");
  o.require(contains(c45.out, "guild: {p1,p2,p3}"), "classify prints guild {p1,p2,p3}");
  const Cmd c15 = cli("classify '" + cfg("fb.json") + "' --faulty p1,p5");
  o.require(contains(c15.out, "guild: none"), "classify prints guild: none");
  time_limit(o, t0, 1.0);
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2026);
  int agree = 0;
  int violations = 0;
  const int total = 1500;
  for (int trial = 0; trial < total; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const AsymmetricFamily ff = oracle::to_lib(oracle::random_afam(rng, n), n);
    const AsymmetricFamily qq = canonical_quorums(ff);
    const B3Result b3 = check_b3(ff);
    const AsymBqsResult bqs = is_asym_bqs(qq, ff);
    agree += b3.holds() == bqs.holds();
    if (b3.holds()) continue;
    ++violations;
    // Q_i = P \ F_i and Q_j = P \ F_j meet inside F_ij.
    const B3Witness& w = *b3.violation;
    const ProcessSet all = ProcessSet::universe(n);
    const ProcessSet qi = all - w.fi;
    const ProcessSet qj = all - w.fj;
    const bool witness = qq[w.i].has(qi) && qq[w.j].has(qj) && (qi & qj).subset_of(w.fij) &&
                         downward_closure_contains(ff[w.i], w.fij) &&
                         downward_closure_contains(ff[w.j], w.fij);
    o.require(witness, "witness construction failed at trial " + std::to_string(trial));
  }
  o.require(agree == total, std::to_string(total - agree) + " disagreements");
  o.notes.push_back(std::to_string(total) + " systems, " + std::to_string(violations) +
                    " B3 violations");
  time_limit(o, t0, 60.0);
  return o;
}

Outcome ac4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    oracle::Fam raw;
    const int k = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < k; ++i) raw.push_back(rng() & oracle::full(n) & ~oracle::Mask{1});
    const SetFamily f = oracle::to_lib(raw, n);
    const oracle::Fam fm = oracle::as_fam(oracle::masks(f));
    const SetFamily q = canonical_quorums(f);
    const oracle::Fam qm = oracle::as_fam(oracle::masks(q));
    o.require(oracle::masks(core_sets(f)) == oracle::core_sets(fm, n),
              "core_sets differs at trial " + std::to_string(trial));
    o.require(oracle::masks(kernels(q)) == oracle::kernels(qm, n),
              "kernels differs at trial " + std::to_string(trial));
    o.require(kernels(q) == core_sets(f), "kernels(canonical) != core_sets at trial " +
                                              std::to_string(trial));
    ++checked;
  }
  o.notes.push_back(std::to_string(checked) + " families");
  time_limit(o, t0, 60.0);
  return o;
}

Outcome ac5() {
  Outcome o;
  const std::pair<int, int> cases[] = {{4, 1}, {7, 2}};
  const std::pair<int, int> want[] = {{3, 2}, {5, 3}};
  for (int c = 0; c < 2; ++c) {
    const auto [n, f] = cases[c];
    const ThresholdSystem t = threshold_asym(n, f);
    const int ceil_q = (n + f + 1 + 1) / 2;
    const int floor_k = (n - f + 1) / 2;
    o.require(ceil_q == want[c].first && floor_k == want[c].second, "closed forms");
    for (ProcessId p = 0; p < n; ++p) {
      for (ProcessSet q : t.quorums[p]) o.require(q.size() == want[c].first, "quorum size");
      const SetFamily k = kernels(t.quorums[p]);
      for (ProcessSet s : k) o.require(s.size() == want[c].second, "kernel size");
      o.require(k == theta(n, want[c].second, ProcessSet::universe(n)), "kernels are all subsets");
    }
  }
  return o;
}

void check_golden(Outcome& o, const char* name, const RunResult& run) {
  const std::string want = slurp(golden(name));
  o.require(!want.empty(), std::string(name) + " golden present");
  o.require(run.trace.to_jsonl() == want, std::string(name) + " trace byte-identical");
}

Outcome ac6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run_scenario(load_scenario(scenario("cb_fb_equivocation")));
  const auto d = deliveries(r.trace);
  o.require(d.count(0) && d.at(0) == "x", "p1 c-delivers x");
  o.require(d.count(5) && d.at(5) == "u", "p6 c-delivers u");
  o.require(!d.count(1) && !d.count(2), "p2 and p3 deliver nothing");
  o.require(!r.trace.truncated, "quiescent");
  o.require(r.ok(), "expectations and invariants");
  check_golden(o, "cb_fb_equivocation", r);
  const Cmd c = cli("run '" + scenario("cb_fb_equivocation") + "'");
  o.require(c.status == 0, "cli run exit 0");
  time_limit(o, t0, 1.0);
  return o;
}

Outcome ac7() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run_scenario(load_scenario(scenario("rb_fb_equivocation")));
  const auto d = deliveries(r.trace);
  for (ProcessId p = 0; p < 3; ++p) {
    o.require(d.count(p) && d.at(p) == "x", "p" + std::to_string(p + 1) + " r-delivers x");
  }
  o.require(!d.count(5), "p6 delivers nothing");
  // READY(x) amplification: p2 reacts to p1's READY, p3 to p2's.
  auto trigger_of_ready = [&](ProcessId p) -> ProcessId {
    ProcessId last_from = -1;
    for (const TraceRecord& rec : r.trace.records) {
      if (rec.kind == Kind::kDeliver && rec.to == p) {
        last_from = std::holds_alternative<ReadyMsg>(*rec.msg) ? rec.from : -1;
      }
      if (rec.kind == Kind::kSend && rec.from == p && std::holds_alternative<ReadyMsg>(*rec.msg)) {
        return std::get<ReadyMsg>(*rec.msg).m == "x" ? last_from : -2;
      }
    }
    return -3;
  };
  o.require(trigger_of_ready(1) == 0, "p2 sends READY(x) on kernel {p1}");
  o.require(trigger_of_ready(2) == 1, "p3 sends READY(x) on kernel {p2}");
  o.require(r.ok(), "expectations and invariants");
  check_golden(o, "rb_fb_equivocation", r);
  time_limit(o, t0, 1.0);
  return o;
}

Outcome ac8() {
  Outcome o;
  struct Case {
    const char* name;
    const char* value;
    bool violated;
    bool golden;
  };
  const Case cases[] = {{"reg_naive_writer", "x", true, true},
                        {"reg_naive_reader", "x", true, true},
                        {"reg_wise_writer", "u", false, false},
                        {"reg_wise_reader", "u", false, false}};
  for (const Case& c : cases) {
    const RunResult r = run_scenario(load_scenario(scenario(c.name)));
    const auto reads = read_results(r.trace);
    o.require(reads.count(3) && reads.at(3) == c.value,
              std::string(c.name) + " read returns " + c.value);
    o.require(r.report.safety_unscoped_violated == c.violated,
              std::string(c.name) + (c.violated ? " flagged" : " passes safety"));
    o.require(r.report.ok(), std::string(c.name) + " scoped invariants hold");
    if (c.golden) check_golden(o, c.name, r);
  }
  return o;
}

Outcome ac9(std::vector<Found>& found) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
  int runs = 0;
  int truncated = 0;
  for (const char* spec : {"fa.json", "fb.json", "threshold_n4f1.json"}) {
    const TrustSpec trust = load_trust_spec(cfg(spec));
    for (Protocol p : {Protocol::kAuthRegister, Protocol::kDwRegister,
                       Protocol::kConsistentBcast, Protocol::kReliableBcast}) {
      FuzzOptions opt;
      opt.protocol = p;
      opt.runs = 500;
      opt.seed = 1;
      opt.jobs = jobs;
      const FuzzSummary s = fuzz(trust, opt);
      runs += s.runs;
      truncated += s.truncated;
      for (const FuzzFailure& f : s.failures) {
        found.push_back({spec, p, f.seed, f.violations});
        std::string what = std::string(spec) + " " + to_string(p) + " seed " +
                           std::to_string(f.seed) + ": " + f.violations.front().invariant +
                           " (" + f.violations.front().detail + ")";
        o.failures.push_back(what);
      }
    }
  }
  if (o.failures.size() > 8) {
    const std::size_t more = o.failures.size() - 8;
    o.failures.resize(8);
    o.failures.push_back("... and " + std::to_string(more) + " more failing runs");
  }
  o.notes.push_back(std::to_string(runs) + " runs, " + std::to_string(truncated) + " truncated");
  time_limit(o, t0, 300.0);
  return o;
}

Outcome ac10(const std::vector<Found>& found) {
  Outcome o;
  for (const char* name : {"cb_fb_equivocation", "rb_fb_equivocation", "reg_naive_writer",
                           "reg_naive_reader"}) {
    const Scenario sc = load_scenario(scenario(name));
    o.require(simulate(sc).to_jsonl() == simulate(sc).to_jsonl(),
              std::string(name) + " replays identically");
  }
  // Every reported failure, plus sample seeds per suite.
  std::vector<Found> replays = found;
  for (const char* spec : {"fa.json", "fb.json", "threshold_n4f1.json"}) {
    for (Protocol p : {Protocol::kAuthRegister, Protocol::kDwRegister,
                       Protocol::kConsistentBcast, Protocol::kReliableBcast}) {
      for (std::uint64_t seed : {1ULL, 77ULL, 499ULL}) replays.push_back({spec, p, seed, {}});
    }
  }
  for (const Found& f : replays) {
    const TrustSpec trust = load_trust_spec(cfg(f.spec.c_str()));
    const Scenario sc = make_fuzz_scenario(trust, f.protocol, f.seed, false);
    const RunResult a = run_scenario(sc);
    const RunResult b = run_scenario(make_fuzz_scenario(trust, f.protocol, f.seed, false));
    const std::string tag = f.spec + " " + to_string(f.protocol) + " seed " + std::to_string(f.seed);
    o.require(a.trace.to_jsonl() == b.trace.to_jsonl(), tag + " replays identically");
    if (!f.violations.empty()) {
      o.require(a.report.violations.size() == f.violations.size(),
                tag + " replay reproduces the reported violations");
    }
  }
  // The CLI reproduces a single fuzz run's trace from its seed.
  const std::string out = "/tmp/asymq_acceptance_replay.jsonl";
  const Cmd c = cli("fuzz '" + cfg("fa.json") + "' --protocol reliable-bcast --runs 1 --seed 77 --trace '" +
                    out + "'");
  const TrustSpec fa = load_trust_spec(cfg("fa.json"));
  o.require(c.status == 0 || c.status == 1, "cli fuzz ran");
  o.require(slurp(out) ==
                simulate(make_fuzz_scenario(fa, Protocol::kReliableBcast, 77, false)).to_jsonl(),
            "cli fuzz trace matches seeded replay");
  std::remove(out.c_str());
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<Outcome()> run;
  };
  std::vector<Found> found;
  const std::vector<Criterion> criteria = {
      {"fa checks", ac1},
      {"fb checks", ac2},
      {"b3 equivalence on random systems", ac3},
      {"kernel and core set oracles", ac4},
      {"threshold reduction", ac5},
      {"golden consistent broadcast trace", ac6},
      {"golden reliable broadcast trace", ac7},
      {"register counterexamples", ac8},
      {"fuzz suites", [&] { return ac9(found); }},
      {"determinism", [&] { return ac10(found); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = o.failures.empty();
    failed += ok ? 0 : 1;
    std::cout << "AC" << (i + 1) << (i + 1 < 10 ? "  " : " ") << (ok ? "PASS" : "FAIL") << "  "
              << criteria[i].label;
    for (const std::string& n : o.notes) std::cout << "; " << n;
    std::cout << '\n';
    for (const std::string& f : o.failures) std::cout << "      - " << f << '\n';
    std::cout.flush();
  }
  return failed;
}
