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

#ifndef ASYMQ_SIGNATURES_HPP_
#define ASYMQ_SIGNATURES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "asymq/process_set.hpp"

namespace asymq {

struct Signature {
  ProcessId signer = -1;
  std::string tag;

  friend bool operator==(const Signature&, const Signature&) = default;
};

class SignatureRegistry;

/// Capability to sign as one process. Only the simulator hands these out,
/// one per process, so no process can sign under another identity.
class SigningKey {
 public:
  ProcessId owner() const { return owner_; }
  Signature sign(std::string_view message) const;

 private:
  friend class SignatureRegistry;
  SigningKey(SignatureRegistry* registry, ProcessId owner)
      : registry_(registry), owner_(owner) {}

  SignatureRegistry* registry_;
  ProcessId owner_;
};

/// Ideal signature functionality: verify(i, m, s) holds iff process i
/// signed m earlier and obtained s. Signing the same message twice yields
/// the same signature.
class SignatureRegistry {
 public:
  SigningKey key_for(ProcessId owner) { return SigningKey(this, owner); }

  bool verify(ProcessId signer, std::string_view message,
              const Signature& sig) const;

  std::size_t size() const { return entries_.size(); }

 private:
  friend class SigningKey;
  Signature sign(ProcessId signer, std::string_view message);

  std::map<std::pair<ProcessId, std::string>, std::string, std::less<>> entries_;
};

/// Signed payload of a register write: length-prefixed fields
/// "write", writer index, timestamp and value.
std::string write_payload(ProcessId writer, std::int64_t ts,
                          std::string_view value);

}  // namespace asymq

#endif  // ASYMQ_SIGNATURES_HPP_
