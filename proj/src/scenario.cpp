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

#include "asymq/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "asymq/broadcast_protocols.hpp"
#include "asymq/register_protocols.hpp"

namespace asymq {

using nlohmann::json;

namespace {

ProcessId process_field(const json& j, const char* key, const TrustSpec& trust) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ConfigError(std::string("expected process name in '") + key + "'");
  }
  return trust.index_of(j[key].get<std::string>());
}

ProcessSet name_set(const json& list, const TrustSpec& trust) {
  if (!list.is_array()) throw ConfigError("expected a list of process names");
  ProcessSet s;
  for (const json& name : list) s = s.with(trust.index_of(name.get<std::string>()));
  return s;
}

Schedule parse_schedule(const json& j, const TrustSpec& trust) {
  Schedule s;
  if (j.is_null()) return s;
  s.seed = j.value("seed", std::uint64_t{0});
  const std::string policy = j.value("policy", "random");
  if (policy == "random") {
    s.policy = SchedulePolicy::kRandom;
  } else if (policy == "global-fifo") {
    s.policy = SchedulePolicy::kGlobalFifo;
  } else {
    throw ConfigError("unknown schedule policy '" + policy + "'");
  }
  for (const json& step : j.value("script", json::array())) {
    if (step.is_array() && step.size() == 2) {
      s.script.push_back({trust.index_of(step[0].get<std::string>()),
                          trust.index_of(step[1].get<std::string>())});
    } else {
      s.script.push_back({process_field(step, "from", trust), process_field(step, "to", trust)});
    }
  }
  s.hold_limit = j.value("hold_limit", s.hold_limit);
  for (const json& h : j.value("hold", json::array())) {
    Hold hold;
    hold.from = process_field(h, "from", trust);
    hold.to = process_field(h, "to", trust);
    if (h.contains("start_invoked")) hold.start_invoked = h["start_invoked"].get<int>();
    if (h.contains("end_completed")) hold.end_completed = h["end_completed"].get<int>();
    s.holds.push_back(hold);
  }
  return s;
}

std::unique_ptr<Process> make_machine(const Scenario& sc, ProcessId p, const Signature& genesis) {
  const SetFamily& q = sc.trust.quorums[p];
  switch (sc.protocol) {
    case Protocol::kAuthRegister:
      return std::make_unique<AuthRegister>(sc.origin, q, genesis);
    case Protocol::kDwRegister:
      return std::make_unique<DoubleWriteRegister>(sc.origin, q,
                                                   core_sets(sc.trust.fail_prone[p]));
    case Protocol::kConsistentBcast:
      return std::make_unique<ConsistentBroadcast>(sc.origin, q);
    case Protocol::kReliableBcast:
      return std::make_unique<ReliableBroadcast>(sc.origin, q, kernels(q));
  }
  throw std::logic_error("unhandled protocol");
}

std::string show(const std::optional<std::string>& v) {
  return v ? "'" + *v + "'" : std::string("nothing");
}

void compare_expectations(const Scenario& sc, const RunResult& run,
                          std::vector<std::string>& failures) {
  const json& ex = sc.expect;
  if (!ex.is_object()) return;
  const TrustSpec& trust = sc.trust;

  if (ex.contains("deliveries")) {
    const auto got = deliveries(run.trace);
    for (const auto& [name, want] : ex["deliveries"].items()) {
      const ProcessId p = trust.index_of(name);
      std::optional<std::string> expected;
      if (!want.is_null()) expected = want.get<std::string>();
      std::optional<std::string> actual;
      if (auto it = got.find(p); it != got.end()) actual = it->second;
      if (expected != actual) {
        failures.push_back(name + " delivered " + show(actual) + ", expected " + show(expected));
      }
    }
  }
  if (ex.contains("reads")) {
    const auto got = read_results(run.trace);
    for (const auto& [id, want] : ex["reads"].items()) {
      std::optional<std::string> expected;
      if (!want.is_null()) expected = want.get<std::string>();
      std::optional<std::string> actual;
      if (auto it = got.find(std::stoi(id)); it != got.end()) actual = it->second;
      if (expected != actual) {
        failures.push_back("read " + id + " returned " + show(actual) + ", expected " +
                           show(expected));
      }
    }
  }
  if (ex.contains("safety_unscoped")) {
    const std::string want = ex["safety_unscoped"].get<std::string>();
    const std::string got = run.report.safety_unscoped_violated ? "violated" : "holds";
    if (want != got) failures.push_back("unscoped safety " + got + ", expected " + want);
  }
  if (ex.contains("classification") || ex.contains("guild")) {
    const CheckContext ctx =
        make_check_context(sc.protocol, sc.origin, trust.quorums, trust.fail_prone, sc.faulty);
    if (ex.contains("classification")) {
      for (const auto& [name, want] : ex["classification"].items()) {
        const ProcessKind k = ctx.classification.kinds[static_cast<std::size_t>(trust.index_of(name))];
        if (to_string(k) != want.get<std::string>()) {
          failures.push_back(name + " is " + to_string(k) + ", expected " + want.get<std::string>());
        }
      }
    }
    if (ex.contains("guild")) {
      std::optional<ProcessSet> want;
      if (!ex["guild"].is_null()) want = name_set(ex["guild"], trust);
      if (want != ctx.guild) {
        failures.push_back("maximal guild is " +
                           (ctx.guild ? trust.format(*ctx.guild) : std::string("none")) +
                           ", expected " + (want ? trust.format(*want) : std::string("none")));
      }
    }
  }
  if (ex.contains("truncated") && ex["truncated"].get<bool>() != run.trace.truncated) {
    failures.push_back(std::string("trace ") + (run.trace.truncated ? "was" : "was not") +
                       " truncated");
  }
}

}  // namespace

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  try {
    if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
    Scenario sc;
    if (!doc.contains("trust")) throw ConfigError("scenario needs 'trust'");
    if (doc["trust"].is_string()) {
      sc.trust = load_trust_spec(base_dir / doc["trust"].get<std::string>());
    } else {
      sc.trust = parse_trust_spec(doc["trust"]);
    }
    sc.protocol = protocol_from_string(doc.at("protocol").get<std::string>());
    const char* role = is_register(sc.protocol) ? "writer" : "sender";
    sc.origin = process_field(doc, role, sc.trust);
    if (doc.contains("instance")) sc.instance = doc["instance"].get<std::string>();
    if (doc.contains("faulty")) sc.faulty = name_set(doc["faulty"], sc.trust);
    if (sc.faulty == ProcessSet::universe(sc.trust.size())) {
      throw ConfigError("at least one process must be correct");
    }
    const json scripts = doc.value("byzantine", json::object());
    for (const auto& [name, script] : scripts.items()) {
      const ProcessId p = sc.trust.index_of(name);
      if (!sc.faulty.contains(p)) {
        throw ConfigError("byzantine script given for correct process " + name);
      }
      sc.byzantine[p] = script;
    }
    int next_id = 1;
    const json invocations = doc.value("invocations", json::array());
    for (const json& inv : invocations) {
      Invocation i;
      i.id = inv.value("id", next_id);
      next_id = i.id + 1;
      i.process = process_field(inv, "process", sc.trust);
      i.op = op_from_string(inv.at("op").get<std::string>());
      i.value = inv.value("value", "");
      if (inv.contains("after")) i.after = inv["after"].get<int>();
      i.at_step = inv.value("at_step", std::int64_t{0});
      for (const Invocation& prior : sc.invocations) {
        if (prior.id == i.id) throw ConfigError("duplicate invocation id " + std::to_string(i.id));
      }
      const bool write_like = i.op != OpKind::kRead;
      if (write_like && i.process != sc.origin) {
        throw ConfigError(std::string(to_string(i.op)) + " must be invoked at the " + role);
      }
      if ((i.op == OpKind::kBroadcast) == is_register(sc.protocol)) {
        throw ConfigError(std::string(to_string(i.op)) + " is not an operation of " +
                          to_string(sc.protocol));
      }
      sc.invocations.push_back(std::move(i));
    }
    sc.schedule = parse_schedule(doc.value("schedule", json()), sc.trust);
    sc.max_steps = doc.value("steps", std::int64_t{100000});
    sc.expect = doc.value("expect", json());
    // Surface script errors now rather than mid-run.
    for (const auto& [p, script] : sc.byzantine) {
      ByzantineProcess probe(script, sc.trust.processes, make_machine(sc, p, Signature{}));
    }
    return sc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

ExecutionTrace simulate(const Scenario& sc) {
  SimConfig cfg;
  cfg.names = sc.trust.processes;
  cfg.instance = sc.instance;
  cfg.invocations = sc.invocations;
  cfg.schedule = sc.schedule;
  cfg.max_steps = sc.max_steps;
  Simulator sim(std::move(cfg));
  const Signature genesis = genesis_signature(sim.registry(), sc.origin);
  for (ProcessId p = 0; p < sc.trust.size(); ++p) {
    std::unique_ptr<Process> machine = make_machine(sc, p, genesis);
    if (sc.faulty.contains(p)) {
      auto it = sc.byzantine.find(p);
      const json script = it == sc.byzantine.end() ? json::object() : it->second;
      machine = std::make_unique<ByzantineProcess>(script, sc.trust.processes, std::move(machine));
    }
    sim.set_process(p, std::move(machine));
  }
  return sim.run();
}

RunResult run_scenario(const Scenario& sc) {
  RunResult run;
  run.trace = simulate(sc);
  const CheckContext ctx =
      make_check_context(sc.protocol, sc.origin, sc.trust.quorums, sc.trust.fail_prone, sc.faulty);
  run.report = check_trace(run.trace, ctx);
  compare_expectations(sc, run, run.expectation_failures);
  return run;
}

}  // namespace asymq
