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

// asymq: check, classify, run and fuzz asymmetric trust configurations.
// Exit codes: 0 ok, 1 violation, 2 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asymq/fuzz.hpp"
#include "asymq/quorum_algebra.hpp"
#include "asymq/scenario.hpp"
#include "asymq/trust_config.hpp"

namespace {

using namespace asymq;
using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

std::uint64_t env_seed() {
  if (const char* s = std::getenv("ASYMQ_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw ConfigError(std::string("ASYMQ_SEED is not an integer: ") + s);
    }
  }
  return 0;
}

void write_trace(const std::string& path, const ExecutionTrace& trace) {
  if (path == "-") {
    std::cout << trace.to_jsonl();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << trace.to_jsonl();
}

int cmd_check(const std::string& path, bool as_json) {
  const TrustSpec spec = load_trust_spec(path);
  const ValidationReport report = validate(spec);
  const AsymmetricFamily kk = kernels(spec.quorums);
  const AsymmetricFamily cc = core_sets(spec.fail_prone);

  if (as_json) {
    ordered_json j;
    j["b3"] = report.b3.holds();
    if (const auto& w = report.b3.violation) {
      j["b3_witness"] = {{"i", spec.processes[static_cast<std::size_t>(w->i)]},
                         {"j", spec.processes[static_cast<std::size_t>(w->j)]},
                         {"fi", spec.format(w->fi)},
                         {"fj", spec.format(w->fj)},
                         {"fij", spec.format(w->fij)}};
    }
    j["asym_quorum_system"] = report.asym_bqs.holds();
    for (ProcessId p = 0; p < spec.size(); ++p) {
      j["processes"].push_back({{"name", spec.processes[static_cast<std::size_t>(p)]},
                                {"available", static_cast<bool>(report.available[static_cast<std::size_t>(p)])},
                                {"fail_prone", spec.format(spec.fail_prone[p])},
                                {"quorums", spec.format(spec.quorums[p])},
                                {"kernels", spec.format(kk[p])},
                                {"core_sets", spec.format(cc[p])}});
    }
    std::cout << j.dump() << '\n';
    return report.b3.holds() ? kOk : kViolation;
  }

  if (const auto& w = report.b3.violation) {
    std::cout << "B3: VIOLATED\n"
              << "  witness: i=" << spec.processes[static_cast<std::size_t>(w->i)]
              << " j=" << spec.processes[static_cast<std::size_t>(w->j)]
              << " Fi=" << spec.format(w->fi) << " Fj=" << spec.format(w->fj)
              << " Fij=" << spec.format(w->fij) << " cover all processes\n";
  } else {
    std::cout << "B3: OK\n";
  }
  const AsymBqsResult& bqs = report.asym_bqs;
  if (bqs.holds()) {
    std::cout << "asymmetric quorum system: OK\n";
  } else if (const auto& c = bqs.consistency_violation) {
    std::cout << "asymmetric quorum system: VIOLATED (consistency: Q"
              << spec.processes[static_cast<std::size_t>(c->i)] << "=" << spec.format(c->qi)
              << " and Q" << spec.processes[static_cast<std::size_t>(c->j)] << "="
              << spec.format(c->qj) << " meet inside " << spec.format(c->fij) << ")\n";
  } else if (const auto& a = bqs.availability_violation) {
    std::cout << "asymmetric quorum system: VIOLATED (availability: no quorum of "
              << spec.processes[static_cast<std::size_t>(a->i)] << " avoids "
              << spec.format(a->fi) << ")\n";
  }
  for (ProcessId p = 0; p < spec.size(); ++p) {
    const auto i = static_cast<std::size_t>(p);
    std::cout << spec.processes[i] << (report.available[i] ? "" : "  (unavailable)") << '\n'
              << "  F: " << spec.format(spec.fail_prone[p]) << '\n'
              << "  Q: " << spec.format(spec.quorums[p]) << '\n'
              << "  K: " << spec.format(kk[p]) << '\n'
              << "  C: " << spec.format(cc[p]) << '\n';
  }
  for (const SelfTrustWarning& w : report.self_trust) {
    std::cout << "warning: " << spec.processes[static_cast<std::size_t>(w.process)]
              << " lists itself in fail-prone set " << spec.format(w.fail_prone_set) << '\n';
  }
  return report.b3.holds() ? kOk : kViolation;
}

int cmd_classify(const std::string& path, const std::vector<std::string>& faulty_names,
                 bool as_json) {
  const TrustSpec spec = load_trust_spec(path);
  const ProcessSet faulty = spec.set_of(faulty_names);
  const Classification cls = classify(spec.fail_prone, faulty);
  const auto guild = maximal_guild(spec.quorums, spec.fail_prone, faulty);
  if (as_json) {
    ordered_json j;
    for (ProcessId p = 0; p < spec.size(); ++p) {
      j["classification"][spec.processes[static_cast<std::size_t>(p)]] =
          to_string(cls.kinds[static_cast<std::size_t>(p)]);
    }
    j["guild"] = guild ? ordered_json(spec.format(*guild)) : ordered_json(nullptr);
    std::cout << j.dump() << '\n';
    return kOk;
  }
  for (ProcessId p = 0; p < spec.size(); ++p) {
    std::cout << spec.processes[static_cast<std::size_t>(p)] << ' '
              << to_string(cls.kinds[static_cast<std::size_t>(p)]) << '\n';
  }
  std::cout << "guild: " << (guild ? spec.format(*guild) : std::string("none")) << '\n';
  return kOk;
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed,
            std::optional<std::int64_t> steps, const std::string& trace_path, bool as_json) {
  Scenario sc = load_scenario(path);
  if (seed) {
    sc.schedule.seed = *seed;
  } else if (std::getenv("ASYMQ_SEED")) {
    sc.schedule.seed = env_seed();
  }
  if (steps) sc.max_steps = *steps;
  const RunResult run = run_scenario(sc);
  if (!trace_path.empty()) write_trace(trace_path, run.trace);

  // Keep stdout a clean JSONL stream when the trace goes there.
  std::ostream& out = trace_path == "-" ? std::cerr : std::cout;
  const auto& names = sc.trust.processes;
  if (as_json) {
    for (const Violation& v : run.report.violations) {
      out << ordered_json{{"verdict", "violation"}, {"invariant", v.invariant},
                                {"detail", v.detail}}.dump()
                << '\n';
    }
    for (const std::string& f : run.expectation_failures) {
      out << ordered_json{{"verdict", "expectation"}, {"detail", f}}.dump() << '\n';
    }
    ordered_json summary{{"verdict", run.ok() ? "ok" : "fail"},
                         {"truncated", run.trace.truncated},
                         {"safety_unscoped", run.report.safety_unscoped_violated ? "violated" : "holds"}};
    for (const auto& [p, v] : deliveries(run.trace)) {
      summary["deliveries"][names[static_cast<std::size_t>(p)]] = v;
    }
    for (const auto& [id, v] : read_results(run.trace)) summary["reads"][std::to_string(id)] = v;
    out << summary.dump() << '\n';
    return run.ok() ? kOk : kViolation;
  }

  out << "protocol: " << to_string(sc.protocol) << "  seed: " << sc.schedule.seed
            << "  records: " << run.trace.records.size() << '\n';
  const auto dl = deliveries(run.trace);
  if (!is_register(sc.protocol)) {
    for (ProcessId p = 0; p < sc.trust.size(); ++p) {
      auto it = dl.find(p);
      out << "  " << names[static_cast<std::size_t>(p)]
                << (sc.faulty.contains(p) ? " (faulty)" : "") << ": "
                << (it == dl.end() ? std::string("-") : "delivers " + it->second) << '\n';
    }
  }
  for (const auto& [id, v] : read_results(run.trace)) {
    out << "  read " << id << " -> '" << v << "'\n";
  }
  if (is_register(sc.protocol)) {
    out << "unscoped regular safety: "
              << (run.report.safety_unscoped_violated ? "VIOLATED" : "holds") << '\n';
  }
  if (!run.report.wise_outside_guild_delivered.empty()) {
    out << "note: wise processes outside the maximal guild delivered: "
              << sc.trust.format(run.report.wise_outside_guild_delivered) << '\n';
  }
  if (run.trace.truncated) out << "TRUNCATED at step bound " << sc.max_steps << '\n';
  for (const Violation& v : run.report.violations) {
    out << "VIOLATION " << v.invariant << ": " << v.detail << '\n';
  }
  for (const std::string& f : run.expectation_failures) out << "EXPECTATION " << f << '\n';
  out << (run.ok() ? "result: ok" : "result: FAIL") << '\n';
  return run.ok() ? kOk : kViolation;
}

int cmd_fuzz(const std::string& path, const std::string& protocol, int runs,
             std::optional<std::uint64_t> seed, std::optional<std::int64_t> steps, bool outside,
             unsigned jobs, const std::string& trace_path, bool as_json) {
  const TrustSpec spec = load_trust_spec(path);
  FuzzOptions opt;
  opt.protocol = protocol_from_string(protocol);
  opt.runs = runs;
  opt.seed = seed ? *seed : env_seed();
  opt.outside = outside;
  opt.jobs = jobs;
  if (steps) opt.max_steps = *steps;
  const FuzzSummary summary = fuzz(spec, opt);

  if (!trace_path.empty()) {
    const std::uint64_t s = summary.failures.empty() ? opt.seed : summary.failures.front().seed;
    const Scenario sc = make_fuzz_scenario(spec, opt.protocol, s, opt.outside, opt.max_steps);
    write_trace(trace_path, simulate(sc));
  }

  // Keep stdout a clean JSONL stream when the trace goes there.
  std::ostream& out = trace_path == "-" ? std::cerr : std::cout;
  if (as_json) {
    for (const FuzzFailure& f : summary.failures) {
      for (const Violation& v : f.violations) {
        out << ordered_json{{"verdict", "violation"}, {"seed", f.seed},
                                  {"invariant", v.invariant}, {"detail", v.detail}}.dump()
                  << '\n';
      }
    }
    out << ordered_json{{"protocol", protocol},      {"runs", summary.runs},
                              {"failures", summary.failures.size()},
                              {"truncated", summary.truncated},
                              {"outside_runs", summary.outside_runs}}.dump()
              << '\n';
    return summary.ok() ? kOk : kViolation;
  }

  out << "protocol: " << protocol << "  runs: " << summary.runs
            << "  seeds: " << opt.seed << ".." << opt.seed + static_cast<std::uint64_t>(std::max(runs, 1) - 1)
            << '\n'
            << "failing runs: " << summary.failures.size() << "  truncated: " << summary.truncated
            << "  F outside closure: " << summary.outside_runs << '\n';
  for (const FuzzFailure& f : summary.failures) {
    for (const Violation& v : f.violations) {
      out << "seed " << f.seed << ": " << v.invariant << ": " << v.detail << '\n';
    }
    out << "  reproduce: asymq fuzz " << path << " --protocol " << protocol
              << (outside ? " --outside" : "") << " --runs 1 --seed " << f.seed << '\n';
  }
  return summary.ok() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymq: asymmetric Byzantine quorum systems toolkit"};
  app.require_subcommand(1);
  bool as_json = false;

  std::string spec_path;
  std::string scenario_path;
  std::vector<std::string> faulty;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> steps;
  std::string trace_path;
  std::string protocol = "consistent-bcast";
  int runs = 100;
  unsigned jobs = 1;
  bool outside = false;

  auto* check = app.add_subcommand("check", "Validate a trust spec, list quorums, kernels, core sets");
  check->add_option("spec", spec_path, "Trust spec (JSON)")->required();

  auto* cls = app.add_subcommand("classify", "Classify processes for a faulty set");
  cls->add_option("spec", spec_path, "Trust spec (JSON)")->required();
  cls->add_option("--faulty", faulty, "Comma-separated faulty processes")->delimiter(',');

  auto* run = app.add_subcommand("run", "Run a scenario and check its invariants");
  run->add_option("scenario", scenario_path, "Scenario (JSON)")->required();
  run->add_option("--seed", seed, "Scheduler seed (default: ASYMQ_SEED, else the scenario's)");
  run->add_option("--steps", steps, "Delivery bound");
  run->add_option("--trace", trace_path, "Write the JSONL trace here ('-' for stdout)");

  auto* fz = app.add_subcommand("fuzz", "Randomized runs against the invariant suite");
  fz->add_option("spec", spec_path, "Trust spec (JSON)")->required();
  fz->add_option("--protocol", protocol, "auth-register | dw-register | consistent-bcast | reliable-bcast");
  fz->add_option("--runs", runs, "Number of runs");
  fz->add_option("--seed", seed, "First seed (default: ASYMQ_SEED, else 0)");
  fz->add_option("--steps", steps, "Delivery bound per run");
  fz->add_option("--jobs", jobs, "Worker threads");
  fz->add_flag("--outside", outside, "Also draw faulty sets outside every fail-prone closure");
  fz->add_option("--trace", trace_path, "Write the trace of the first failing run (or the first run)");

  for (CLI::App* sub : {check, cls, run, fz}) {
    sub->add_flag("--json", as_json, "Machine-readable output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*check) return cmd_check(spec_path, as_json);
    if (*cls) return cmd_classify(spec_path, faulty, as_json);
    if (*run) return cmd_run(scenario_path, seed, steps, trace_path, as_json);
    if (*fz) {
      return cmd_fuzz(spec_path, protocol, runs, seed, steps, outside, jobs, trace_path, as_json);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
