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

#include "asymq/fuzz.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <thread>

namespace asymq {

using nlohmann::json;

namespace {

using Rng = std::mt19937_64;

std::uint64_t pick(Rng& rng, std::uint64_t k) { return rng() % k; }
bool coin(Rng& rng) { return (rng() & 1U) != 0; }

ProcessId pick_member(Rng& rng, ProcessSet s) {
  const auto m = s.members();
  return m[static_cast<std::size_t>(pick(rng, m.size()))];
}

ProcessSet random_subset(Rng& rng, ProcessSet base) {
  ProcessSet out;
  for (ProcessId p : base.members()) {
    if (coin(rng)) out = out.with(p);
  }
  return out;
}

std::vector<ProcessSet> fail_prone_closure(const TrustSpec& trust) {
  std::set<ProcessSet> all;
  for (const SetFamily& f : trust.fail_prone) {
    for (ProcessSet maximal : f) {
      const std::uint64_t full = maximal.bits();
      for (std::uint64_t sub = full;; sub = (sub - 1) & full) {
        all.insert(ProcessSet(sub));
        if (sub == 0) break;
      }
    }
  }
  return {all.begin(), all.end()};
}

bool in_closure(const TrustSpec& trust, ProcessSet f) {
  return std::any_of(trust.fail_prone.begin(), trust.fail_prone.end(),
                     [&](const SetFamily& fi) { return downward_closure_contains(fi, f); });
}

json names_of(ProcessSet s, const TrustSpec& trust) {
  json out = json::array();
  for (ProcessId p : s.members()) out.push_back(trust.processes[static_cast<std::size_t>(p)]);
  return out;
}

// Sends `a` to a random subset and `b` to the remaining processes.
json split_actions(Rng& rng, const TrustSpec& trust, const json& a, const json& b) {
  const ProcessSet all = ProcessSet::universe(trust.size());
  const ProcessSet left = random_subset(rng, all);
  return json::array({{{"to", names_of(left, trust)}, {"msg", a}},
                      {{"to", names_of(all - left, trust)}, {"msg", b}}});
}

json broadcast_script(Rng& rng, const TrustSpec& trust, Protocol protocol, bool is_sender) {
  static const char* kPool[] = {"m", "x", "u"};
  auto value = [&] { return std::string(kPool[pick(rng, 3)]); };
  json script{{"base", coin(rng) ? "honest" : "silent"}, {"start", json::array()},
              {"rules", json::array()}};
  if (is_sender) {
    script["start"] = split_actions(rng, trust, {{"type", "SEND"}, {"m", value()}},
                                    {{"type", "SEND"}, {"m", value()}});
  }
  if (coin(rng)) {
    script["rules"].push_back(
        {{"match", {{"type", "SEND"}}},
         {"once", true},
         {"actions", split_actions(rng, trust, {{"type", "ECHO"}, {"m", value()}},
                                   {{"type", "ECHO"}, {"m", value()}})}});
  }
  if (protocol == Protocol::kReliableBcast && coin(rng)) {
    script["rules"].push_back(
        {{"match", {{"type", "ECHO"}}},
         {"once", true},
         {"actions", split_actions(rng, trust, {{"type", "READY"}, {"m", value()}},
                                   {{"type", "READY"}, {"m", value()}})}});
  }
  if (coin(rng)) {
    // Unprompted messages before anything was sent.
    const char* type = protocol == Protocol::kReliableBcast && coin(rng) ? "READY" : "ECHO";
    for (const json& a : split_actions(rng, trust, {{"type", type}, {"m", value()}},
                                       {{"type", type}, {"m", value()}})) {
      script["start"].push_back(a);
    }
  }
  return script;
}

json register_script(Rng& rng, const TrustSpec& trust, Protocol protocol, ProcessId writer) {
  json script{{"base", coin(rng) ? "honest" : "silent"}, {"rules", json::array()}};
  json& rules = script["rules"];
  if (coin(rng)) {
    // Acknowledge without storing: the state stays stale.
    rules.push_back({{"match", {{"type", "WRITE"}}},
                     {"actions", {{{"to", "sender"}, {"msg", {{"type", "ACK"}, {"ts", "$ts"}}}}}}});
    if (protocol == Protocol::kDwRegister) {
      rules.push_back(
          {{"match", {{"type", "PREWRITE"}}},
           {"actions", {{{"to", "sender"}, {"msg", {{"type", "PREACK"}, {"ts", "$ts"}}}}}}});
    }
  }
  if (coin(rng)) {
    json reply;
    if (protocol == Protocol::kAuthRegister) {
      reply = {{"type", "VALUE"},
               {"rid", "$rid"},
               {"ts", 1000},
               {"v", "forged"},
               {"sig", {{"signer", trust.processes[static_cast<std::size_t>(writer)]},
                        {"tag", "0000"}}}};
    } else {
      reply = {{"type", "VALUE"}, {"rid", "$rid"}, {"pts", 1001},
               {"pv", "forged"},  {"ts", 1000},    {"v", "forged"}};
    }
    rules.push_back({{"match", {{"type", "READ"}}},
                     {"actions", {{{"to", "sender"}, {"msg", reply}}}}});
  }
  return script;
}

}  // namespace

Scenario make_fuzz_scenario(const TrustSpec& trust, Protocol protocol, std::uint64_t seed,
                            bool outside, std::int64_t max_steps) {
  Rng rng(seed);
  const int n = trust.size();
  const ProcessSet all = ProcessSet::universe(n);

  Scenario sc;
  sc.trust = trust;
  sc.protocol = protocol;
  sc.max_steps = max_steps;
  sc.schedule.seed = seed;
  sc.schedule.policy = SchedulePolicy::kRandom;

  const std::vector<ProcessSet> closure = fail_prone_closure(trust);
  sc.faulty = closure[static_cast<std::size_t>(pick(rng, closure.size()))];
  if (outside && coin(rng)) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const ProcessSet f = random_subset(rng, all);
      if (f != all && !in_closure(trust, f)) {
        sc.faulty = f;
        break;
      }
    }
  }
  if (sc.faulty == all) sc.faulty = sc.faulty.without(0);
  const ProcessSet correct = all - sc.faulty;

  const bool faulty_origin =
      !is_register(protocol) && !sc.faulty.empty() && pick(rng, 3) == 0;
  sc.origin = pick_member(rng, faulty_origin ? sc.faulty : correct);

  for (ProcessId p : sc.faulty.members()) {
    sc.byzantine[p] = is_register(protocol)
                          ? register_script(rng, trust, protocol, sc.origin)
                          : broadcast_script(rng, trust, protocol, p == sc.origin);
  }

  int id = 1;
  if (is_register(protocol)) {
    const int writes = 1 + static_cast<int>(pick(rng, 3));
    for (int w = 1; w <= writes; ++w) {
      sc.invocations.push_back({id++, sc.origin, OpKind::kWrite, "v" + std::to_string(w),
                                std::nullopt, static_cast<std::int64_t>(pick(rng, 80))});
    }
    const int reads = 1 + static_cast<int>(pick(rng, 3));
    for (int r = 0; r < reads; ++r) {
      sc.invocations.push_back({id++, pick_member(rng, correct), OpKind::kRead, "", std::nullopt,
                                static_cast<std::int64_t>(pick(rng, 120))});
    }
  } else if (!faulty_origin) {
    sc.invocations.push_back({id++, sc.origin, OpKind::kBroadcast, "m", std::nullopt, 0});
  }

  const int holds = static_cast<int>(pick(rng, 3));
  for (int h = 0; h < holds; ++h) {
    Hold hold;
    hold.from = static_cast<ProcessId>(pick(rng, static_cast<std::uint64_t>(n)));
    hold.to = static_cast<ProcessId>(pick(rng, static_cast<std::uint64_t>(n)));
    if (!sc.invocations.empty() && coin(rng)) {
      hold.end_completed = sc.invocations[static_cast<std::size_t>(
                                              pick(rng, sc.invocations.size()))].id;
    }
    sc.schedule.holds.push_back(hold);
  }
  return sc;
}

FuzzSummary fuzz(const TrustSpec& trust, const FuzzOptions& options) {
  const int runs = std::max(0, options.runs);
  struct Outcome {
    bool truncated = false;
    bool outside = false;
    std::vector<Violation> violations;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(runs));

  auto work = [&](unsigned worker, unsigned workers) {
    for (int i = static_cast<int>(worker); i < runs; i += static_cast<int>(workers)) {
      const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(i);
      const Scenario sc =
          make_fuzz_scenario(trust, options.protocol, seed, options.outside, options.max_steps);
      RunResult run = run_scenario(sc);
      Outcome& o = outcomes[static_cast<std::size_t>(i)];
      o.truncated = run.trace.truncated;
      o.outside = !in_closure(trust, sc.faulty);
      o.violations = std::move(run.report.violations);
    }
  };

  const unsigned workers = std::max(1U, std::min<unsigned>(options.jobs, static_cast<unsigned>(std::max(runs, 1))));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (std::thread& t : pool) t.join();
  }

  FuzzSummary summary;
  summary.runs = runs;
  for (int i = 0; i < runs; ++i) {
    Outcome& o = outcomes[static_cast<std::size_t>(i)];
    summary.truncated += o.truncated ? 1 : 0;
    summary.outside_runs += o.outside ? 1 : 0;
    if (!o.violations.empty()) {
      summary.failures.push_back({options.seed + static_cast<std::uint64_t>(i),
                                  std::move(o.violations)});
    }
  }
  return summary;
}

}  // namespace asymq
