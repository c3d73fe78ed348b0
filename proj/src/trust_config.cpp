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

#include "asymq/trust_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace asymq {

using nlohmann::json;

namespace {

ProcessId lookup(std::span<const std::string> processes, std::string_view name) {
  auto it = std::find(processes.begin(), processes.end(), name);
  if (it == processes.end()) {
    throw ConfigError("unknown process name '" + std::string(name) + "'");
  }
  return static_cast<ProcessId>(it - processes.begin());
}

ProcessSet parse_name_list(const json& list,
                           std::span<const std::string> processes) {
  if (!list.is_array()) throw ConfigError("expected a list of process names");
  ProcessSet s;
  for (const json& name : list) {
    if (!name.is_string()) throw ConfigError("process names must be strings");
    s = s.with(lookup(processes, name.get<std::string>()));
  }
  return s;
}

json name_list(ProcessSet s, std::span<const std::string> processes) {
  json out = json::array();
  for (ProcessId p : s.members()) out.push_back(processes[static_cast<std::size_t>(p)]);
  return out;
}

json family_json(const SetFamily& f, std::span<const std::string> processes) {
  json out = json::array();
  for (ProcessSet s : f) out.push_back(name_list(s, processes));
  return out;
}

// Unnormalized member sets of an expression.
std::vector<ProcessSet> expand_expr(const json& expr, std::span<const std::string> processes) {
  const int n = static_cast<int>(processes.size());
  if (expr.is_array()) {
    if (expr.empty()) return {ProcessSet{}};
    std::vector<ProcessSet> sets;
    for (const json& s : expr) sets.push_back(parse_name_list(s, processes));
    return sets;
  }
  if (!expr.is_object() || expr.size() != 1) {
    throw ConfigError("malformed expression: " + expr.dump());
  }
  if (expr.contains("theta")) {
    const json& t = expr["theta"];
    if (!t.is_object() || !t.contains("k") || !t.contains("of") ||
        !t["k"].is_number_integer()) {
      throw ConfigError("theta needs integer 'k' and list 'of'");
    }
    const ProcessSet base = parse_name_list(t["of"], processes);
    const int k = t["k"].get<int>();
    if (k < 0 || k > base.size()) {
      throw ConfigError("theta k=" + std::to_string(k) + " exceeds set size " +
                        std::to_string(base.size()));
    }
    const SetFamily all = theta(n, k, base);
    return {all.begin(), all.end()};
  }
  if (expr.contains("star")) {
    const json& operands = expr["star"];
    if (!operands.is_array() || operands.size() < 2) {
      throw ConfigError("star needs at least two operands");
    }
    std::vector<ProcessSet> acc = expand_expr(operands[0], processes);
    for (std::size_t i = 1; i < operands.size(); ++i) {
      std::vector<ProcessSet> next;
      for (ProcessSet x : acc) {
        for (ProcessSet y : expand_expr(operands[i], processes)) next.push_back(x | y);
      }
      acc = std::move(next);
    }
    return acc;
  }
  throw ConfigError("unknown operator in expression: " + expr.dump());
}

// Per-process map of expressions; every process must appear exactly once.
std::vector<SetFamily> parse_family_map(const json& map, const char* what,
                                        std::span<const std::string> processes,
                                        bool upward) {
  if (!map.is_object()) throw ConfigError(std::string(what) + " must be an object");
  const int n = static_cast<int>(processes.size());
  std::vector<std::optional<SetFamily>> parsed(processes.size());
  for (const auto& [name, expr] : map.items()) {
    const ProcessId p = lookup(processes, name);
    try {
      std::vector<ProcessSet> sets = expand_expr(expr, processes);
      parsed[static_cast<std::size_t>(p)] =
          upward ? SetFamily::minimal(n, std::move(sets)) : SetFamily(n, std::move(sets));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(what) + " of " + name + ": " + e.what());
    }
  }
  std::vector<SetFamily> out;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (!parsed[i]) {
      throw ConfigError(std::string(what) + " missing for " + processes[i]);
    }
    out.push_back(std::move(*parsed[i]));
  }
  return out;
}

}  // namespace

ProcessId TrustSpec::index_of(std::string_view name) const {
  return lookup(processes, name);
}

ProcessSet TrustSpec::set_of(std::span<const std::string> names) const {
  ProcessSet s;
  for (const std::string& name : names) s = s.with(index_of(name));
  return s;
}

SetFamily parse_family_expr(const json& expr,
                            std::span<const std::string> processes) {
  return SetFamily(static_cast<int>(processes.size()), expand_expr(expr, processes));
}

TrustSpec make_trust_spec(std::vector<std::string> processes,
                          AsymmetricFamily fail_prone,
                          std::optional<AsymmetricFamily> quorums) {
  TrustSpec spec;
  spec.processes = std::move(processes);
  if (fail_prone.size() != spec.processes.size()) {
    throw ConfigError("fail-prone array size does not match process count");
  }
  spec.fail_prone = std::move(fail_prone);
  spec.explicit_quorums = quorums.has_value();
  spec.quorums = quorums ? std::move(*quorums) : canonical_quorums(spec.fail_prone);
  if (spec.quorums.size() != spec.processes.size()) {
    throw ConfigError("quorum array size does not match process count");
  }
  return spec;
}

TrustSpec parse_trust_spec(const json& doc) {
  if (!doc.is_object()) throw ConfigError("trust spec must be a JSON object");
  if (!doc.contains("processes") || !doc["processes"].is_array()) {
    throw ConfigError("trust spec needs a 'processes' list");
  }
  std::vector<std::string> processes;
  std::set<std::string> seen;
  for (const json& name : doc["processes"]) {
    if (!name.is_string()) throw ConfigError("process names must be strings");
    const std::string s = name.get<std::string>();
    if (!seen.insert(s).second) throw ConfigError("duplicate process name '" + s + "'");
    processes.push_back(s);
  }
  if (processes.empty()) throw ConfigError("no processes declared");
  if (processes.size() > static_cast<std::size_t>(kMaxProcesses)) {
    throw ConfigError("at most 64 processes are supported");
  }
  if (!doc.contains("fail_prone")) throw ConfigError("trust spec needs 'fail_prone'");

  AsymmetricFamily ff(parse_family_map(doc["fail_prone"], "fail_prone", processes, false));
  std::optional<AsymmetricFamily> qq;
  if (doc.contains("quorums") && !doc["quorums"].is_null()) {
    qq = AsymmetricFamily(parse_family_map(doc["quorums"], "quorums", processes, true));
  }
  return make_trust_spec(std::move(processes), std::move(ff), std::move(qq));
}

TrustSpec parse_trust_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return parse_trust_spec(doc);
}

TrustSpec load_trust_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return parse_trust_spec(std::string_view(text));
}

json emit_trust_spec(const TrustSpec& spec) {
  json doc;
  doc["processes"] = spec.processes;
  json fp = json::object();
  for (ProcessId i = 0; i < spec.size(); ++i) {
    fp[spec.processes[static_cast<std::size_t>(i)]] =
        family_json(spec.fail_prone[i], spec.processes);
  }
  doc["fail_prone"] = std::move(fp);
  if (spec.explicit_quorums) {
    json q = json::object();
    for (ProcessId i = 0; i < spec.size(); ++i) {
      q[spec.processes[static_cast<std::size_t>(i)]] =
          family_json(spec.quorums[i], spec.processes);
    }
    doc["quorums"] = std::move(q);
  }
  return doc;
}

ValidationReport validate(const TrustSpec& spec) {
  ValidationReport report;
  report.b3 = check_b3(spec.fail_prone);
  for (ProcessId i = 0; i < spec.size(); ++i) {
    report.available.push_back(is_available(spec.quorums[i], spec.fail_prone[i]));
    for (ProcessSet f : spec.fail_prone[i]) {
      if (f.contains(i)) report.self_trust.push_back({i, f});
    }
  }
  report.asym_bqs = is_asym_bqs(spec.quorums, spec.fail_prone);
  return report;
}

}  // namespace asymq
