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

#ifndef ASYMQ_MESSAGES_HPP_
#define ASYMQ_MESSAGES_HPP_

// Protocol messages exchanged over simulated links, and their tagged JSON
// form ({"type":"ECHO","m":"x"}). Register messages follow the field
// layouts of the signed and double-write register emulations; broadcast
// messages carry the payload only, the instance label travels in the
// envelope.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include <json.hpp>

#include "asymq/signatures.hpp"

namespace asymq {

struct WriteMsg {
  std::int64_t ts = 0;
  std::string value;
  std::optional<Signature> sig;  // absent in the double-write protocol
  friend bool operator==(const WriteMsg&, const WriteMsg&) = default;
};

/// Acknowledges the WRITE with timestamp `ts`.
struct AckMsg {
  std::int64_t ts = 0;
  friend bool operator==(const AckMsg&, const AckMsg&) = default;
};

struct ReadMsg {
  std::int64_t rid = 0;
  friend bool operator==(const ReadMsg&, const ReadMsg&) = default;
};

/// Reply of the signed register.
struct ValueMsg {
  std::int64_t rid = 0;
  std::int64_t ts = 0;
  std::string value;
  Signature sig;
  friend bool operator==(const ValueMsg&, const ValueMsg&) = default;
};

struct PreWriteMsg {
  std::int64_t ts = 0;
  std::string value;
  friend bool operator==(const PreWriteMsg&, const PreWriteMsg&) = default;
};

struct PreAckMsg {
  std::int64_t ts = 0;
  friend bool operator==(const PreAckMsg&, const PreAckMsg&) = default;
};

/// Reply of the double-write register: pre-written and written pairs.
struct DwValueMsg {
  std::int64_t rid = 0;
  std::int64_t pts = 0;
  std::string pv;
  std::int64_t ts = 0;
  std::string value;
  friend bool operator==(const DwValueMsg&, const DwValueMsg&) = default;
};

struct SendMsg {
  std::string m;
  friend bool operator==(const SendMsg&, const SendMsg&) = default;
};
struct EchoMsg {
  std::string m;
  friend bool operator==(const EchoMsg&, const EchoMsg&) = default;
};
struct ReadyMsg {
  std::string m;
  friend bool operator==(const ReadyMsg&, const ReadyMsg&) = default;
};

using Message = std::variant<WriteMsg, AckMsg, ReadMsg, ValueMsg, PreWriteMsg,
                             PreAckMsg, DwValueMsg, SendMsg, EchoMsg, ReadyMsg>;

/// "WRITE", "ACK", ... ; both register replies are "VALUE".
const char* message_type(const Message& msg);

/// Signers are written by name; `names` may be empty for default names.
nlohmann::ordered_json to_json(const Message& msg,
                               std::span<const std::string> names = {});

/// Throws std::invalid_argument on unknown types or missing fields.
Message message_from_json(const nlohmann::json& j,
                          std::span<const std::string> names = {});

}  // namespace asymq

#endif  // ASYMQ_MESSAGES_HPP_
