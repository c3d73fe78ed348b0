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

#include "asymq/messages.hpp"

#include <algorithm>
#include <stdexcept>

namespace asymq {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string name_of(ProcessId p, std::span<const std::string> names) {
  if (p >= 0 && static_cast<std::size_t>(p) < names.size()) {
    return names[static_cast<std::size_t>(p)];
  }
  return default_name(p);
}

ProcessId id_of(const std::string& name, std::span<const std::string> names) {
  if (!names.empty()) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<ProcessId>(it - names.begin());
  } else if (name.size() > 1 && name[0] == 'p') {
    return std::stoi(name.substr(1)) - 1;
  }
  throw std::invalid_argument("unknown signer '" + name + "'");
}

ordered_json sig_json(const Signature& s, std::span<const std::string> names) {
  return ordered_json{{"signer", name_of(s.signer, names)}, {"tag", s.tag}};
}

Signature sig_from(const json& j, std::span<const std::string> names) {
  return Signature{id_of(j.at("signer").get<std::string>(), names),
                   j.at("tag").get<std::string>()};
}

}  // namespace

const char* message_type(const Message& msg) {
  return std::visit(Overloaded{
                        [](const WriteMsg&) { return "WRITE"; },
                        [](const AckMsg&) { return "ACK"; },
                        [](const ReadMsg&) { return "READ"; },
                        [](const ValueMsg&) { return "VALUE"; },
                        [](const PreWriteMsg&) { return "PREWRITE"; },
                        [](const PreAckMsg&) { return "PREACK"; },
                        [](const DwValueMsg&) { return "VALUE"; },
                        [](const SendMsg&) { return "SEND"; },
                        [](const EchoMsg&) { return "ECHO"; },
                        [](const ReadyMsg&) { return "READY"; },
                    },
                    msg);
}

ordered_json to_json(const Message& msg, std::span<const std::string> names) {
  ordered_json j;
  j["type"] = message_type(msg);
  std::visit(Overloaded{
                 [&](const WriteMsg& m) {
                   j["ts"] = m.ts;
                   j["v"] = m.value;
                   if (m.sig) j["sig"] = sig_json(*m.sig, names);
                 },
                 [&](const AckMsg& m) { j["ts"] = m.ts; },
                 [&](const ReadMsg& m) { j["rid"] = m.rid; },
                 [&](const ValueMsg& m) {
                   j["rid"] = m.rid;
                   j["ts"] = m.ts;
                   j["v"] = m.value;
                   j["sig"] = sig_json(m.sig, names);
                 },
                 [&](const PreWriteMsg& m) {
                   j["ts"] = m.ts;
                   j["v"] = m.value;
                 },
                 [&](const PreAckMsg& m) { j["ts"] = m.ts; },
                 [&](const DwValueMsg& m) {
                   j["rid"] = m.rid;
                   j["pts"] = m.pts;
                   j["pv"] = m.pv;
                   j["ts"] = m.ts;
                   j["v"] = m.value;
                 },
                 [&](const SendMsg& m) { j["m"] = m.m; },
                 [&](const EchoMsg& m) { j["m"] = m.m; },
                 [&](const ReadyMsg& m) { j["m"] = m.m; },
             },
             msg);
  return j;
}

Message message_from_json(const json& j, std::span<const std::string> names) {
  try {
    const std::string type = j.at("type").get<std::string>();
    auto i64 = [&](const char* k) { return j.at(k).get<std::int64_t>(); };
    auto str = [&](const char* k) { return j.at(k).get<std::string>(); };
    if (type == "WRITE") {
      WriteMsg m{i64("ts"), str("v"), std::nullopt};
      if (j.contains("sig")) m.sig = sig_from(j["sig"], names);
      return m;
    }
    if (type == "ACK") return AckMsg{i64("ts")};
    if (type == "READ") return ReadMsg{i64("rid")};
    if (type == "VALUE") {
      if (j.contains("pts")) {
        return DwValueMsg{i64("rid"), i64("pts"), str("pv"), i64("ts"), str("v")};
      }
      return ValueMsg{i64("rid"), i64("ts"), str("v"), sig_from(j.at("sig"), names)};
    }
    if (type == "PREWRITE") return PreWriteMsg{i64("ts"), str("v")};
    if (type == "PREACK") return PreAckMsg{i64("ts")};
    if (type == "SEND") return SendMsg{str("m")};
    if (type == "ECHO") return EchoMsg{str("m")};
    if (type == "READY") return ReadyMsg{str("m")};
    throw std::invalid_argument("unknown message type '" + type + "'");
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed message " + j.dump() + ": " + e.what());
  }
}

}  // namespace asymq
