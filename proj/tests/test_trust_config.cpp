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

#include <string>

#include <json.hpp>

#include "asymq/trust_config.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace asymq;
using nlohmann::json;

namespace {

const std::string kDir = ASYMQ_SOURCE_DIR "/configs/";

// Explicit member lists, 1-based process numbers.
SetFamily family(int n, std::initializer_list<std::initializer_list<int>> sets) {
  std::vector<ProcessSet> out;
  for (const auto& s : sets) {
    ProcessSet p;
    for (int id : s) p = p.with(id - 1);
    out.push_back(p);
  }
  return SetFamily(n, out);
}

}  // namespace

TEST_CASE("fa.json expands to the five fail-prone systems") {
  const TrustSpec spec = load_trust_spec(kDir + "fa.json");
  REQUIRE(spec.size() == 5);
  CHECK(spec.fail_prone[0] == family(5, {{2}, {3}, {4}, {5}}));
  CHECK(spec.fail_prone[1] == family(5, {{1}, {3}, {4}, {5}}));
  CHECK(spec.fail_prone[2] == family(5, {{1, 4}, {1, 5}, {2, 4}, {2, 5}}));
  CHECK(spec.fail_prone[3] == family(5, {{1}, {2}, {3}, {5}}));
  CHECK(spec.fail_prone[4] == family(5, {{2, 4}}));
  CHECK_FALSE(spec.explicit_quorums);
  CHECK(spec.quorums[4] == family(5, {{1, 3, 5}}));
  CHECK(spec.quorums[0] == family(5, {{1, 3, 4, 5}, {1, 2, 4, 5}, {1, 2, 3, 5}, {1, 2, 3, 4}}));
}

TEST_CASE("fb.json expands to the six fail-prone systems") {
  const TrustSpec spec = load_trust_spec(kDir + "fb.json");
  REQUIRE(spec.size() == 6);
  CHECK(spec.fail_prone[0] == family(6, {{2, 4, 6}, {2, 5, 6}, {4, 5, 6}}));
  CHECK(spec.fail_prone[1] == family(6, {{3, 4, 6}, {3, 5, 6}, {4, 5, 6}}));
  CHECK(spec.fail_prone[2] == family(6, {{1, 4, 6}, {1, 5, 6}, {4, 5, 6}}));
  CHECK(spec.fail_prone[3] == family(6, {{1, 6}, {2, 6}, {3, 6}, {5, 6}}));
  CHECK(spec.fail_prone[4] == family(6, {{1, 6}, {2, 6}, {3, 6}, {4, 6}}));
  CHECK(spec.fail_prone[5] == family(6, {{1, 2}, {1, 3}, {1, 4}, {1, 5}}));
}

TEST_CASE("validation of the bundled specs agrees with brute force") {
  for (const char* file : {"fa.json", "fb.json", "threshold_n4f1.json", "bad_n3.json"}) {
    CAPTURE(file);
    const TrustSpec spec = load_trust_spec(kDir + file);
    const int n = spec.size();
    oracle::AFam ff;
    oracle::AFam qq;
    for (ProcessId i = 0; i < n; ++i) {
      ff.push_back(oracle::as_fam(oracle::masks(spec.fail_prone[i])));
      qq.push_back(oracle::as_fam(oracle::masks(spec.quorums[i])));
    }
    const ValidationReport r = validate(spec);
    CHECK(r.b3.holds() == oracle::b3(ff, n));
    CHECK(!r.asym_bqs.consistency_violation == oracle::consistent(qq, ff, n));
    CHECK(!r.asym_bqs.availability_violation == oracle::available(qq, ff));
    // The threshold specs let every process fail, itself included.
    CHECK(r.self_trust.empty() == (n > 4));
  }
  CHECK(validate(load_trust_spec(kDir + "fa.json")).b3.holds());
  CHECK_FALSE(validate(load_trust_spec(kDir + "bad_n3.json")).b3.holds());
}

TEST_CASE("expression forms") {
  const std::vector<std::string> names{"a", "b", "c", "d"};
  CHECK(parse_family_expr(json::parse(R"([["a","b"],["a"]])"), names) ==
        family(4, {{1, 2}}));
  CHECK(parse_family_expr(json::parse(R"({"theta":{"k":2,"of":["a","b","c"]}})"), names) ==
        family(4, {{1, 2}, {1, 3}, {2, 3}}));
  CHECK(parse_family_expr(json::parse(R"({"star":[[["a"]],[["b"]],[["c"],["d"]]]})"), names) ==
        family(4, {{1, 2, 3}, {1, 2, 4}}));
  CHECK(parse_family_expr(json::parse("[]"), names) == SetFamily(4, {ProcessSet{}}));
}

TEST_CASE("malformed specs are rejected") {
  const char* bad[] = {
      R"([])",
      R"({"fail_prone":{}})",
      R"({"processes":[],"fail_prone":{}})",
      R"({"processes":["a","a"],"fail_prone":{"a":[]}})",
      R"({"processes":["a","b"],"fail_prone":{"a":[]}})",
      R"({"processes":["a","b"],"fail_prone":{"a":[],"b":[["z"]]}})",
      R"({"processes":["a","b"],"fail_prone":{"a":[],"b":{"theta":{"k":3,"of":["a"]}}}})",
      R"({"processes":["a","b"],"fail_prone":{"a":[],"b":{"star":[[["a"]]]}}})",
      R"({"processes":["a","b"],"fail_prone":{"a":[],"b":{"cup":[]}}})",
      R"({"processes":["a","b"],"fail_prone":{"a":[],"b":"a"}})",
      R"({"processes":["a"],"fail_prone":{"a":[]},"quorums":{"b":[]}})",
      R"({"processes": [)",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_trust_spec(std::string_view(text)), ConfigError);
  }
  CHECK_THROWS_AS(load_trust_spec(kDir + "does_not_exist.json"), ConfigError);
}

TEST_CASE("explicit quorums are kept minimal and survive a round trip") {
  const TrustSpec spec = parse_trust_spec(std::string_view(R"({
    "processes": ["a", "b", "c"],
    "fail_prone": {"a": [["b"]], "b": [["a"]], "c": [["a"], ["b"]]},
    "quorums": {"a": [["a","c"], ["a","b","c"]], "b": [["b","c"]], "c": [["c"]]}
  })"));
  CHECK(spec.explicit_quorums);
  CHECK(spec.quorums[0] == SetFamily::minimal(3, {ProcessSet{0, 2}}));
  const TrustSpec again = parse_trust_spec(emit_trust_spec(spec));
  CHECK(again.processes == spec.processes);
  CHECK(again.fail_prone == spec.fail_prone);
  CHECK(again.quorums == spec.quorums);

  const TrustSpec fa = load_trust_spec(kDir + "fa.json");
  const TrustSpec fa2 = parse_trust_spec(emit_trust_spec(fa));
  CHECK(fa2.fail_prone == fa.fail_prone);
  CHECK(fa2.quorums == fa.quorums);
  CHECK_FALSE(emit_trust_spec(fa).contains("quorums"));
}

TEST_CASE("self-trust warnings and name lookup") {
  const TrustSpec spec = parse_trust_spec(std::string_view(
      R"({"processes":["a","b","c"],"fail_prone":{"a":[["a"]],"b":[["c"]],"c":[["a"]]}})"));
  const ValidationReport r = validate(spec);
  REQUIRE(r.self_trust.size() == 1);
  CHECK(r.self_trust[0].process == 0);
  CHECK(spec.index_of("c") == 2);
  CHECK_THROWS_AS(spec.index_of("d"), ConfigError);
  CHECK(spec.format(ProcessSet{0, 2}) == "{a,c}");
}
