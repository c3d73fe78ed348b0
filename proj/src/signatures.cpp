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

#include "asymq/signatures.hpp"

#include <cstdio>

namespace asymq {

namespace {

// FNV-1a; tags only need to be deterministic, the registry is the proof.
std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void append_field(std::string& out, std::string_view field) {
  out += std::to_string(field.size());
  out += ':';
  out += field;
}

}  // namespace

Signature SigningKey::sign(std::string_view message) const {
  return registry_->sign(owner_, message);
}

Signature SignatureRegistry::sign(ProcessId signer, std::string_view message) {
  auto key = std::make_pair(signer, std::string(message));
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    const std::string id = std::to_string(signer) + '/';
    char tag[17];
    std::snprintf(tag, sizeof tag, "%016llx",
                  static_cast<unsigned long long>(fnv1a(message, fnv1a(id))));
    it = entries_.emplace(std::move(key), tag).first;
  }
  return Signature{signer, it->second};
}

bool SignatureRegistry::verify(ProcessId signer, std::string_view message,
                               const Signature& sig) const {
  if (sig.signer != signer) return false;
  auto it = entries_.find(std::make_pair(signer, std::string(message)));
  return it != entries_.end() && it->second == sig.tag;
}

std::string write_payload(ProcessId writer, std::int64_t ts,
                          std::string_view value) {
  std::string out;
  append_field(out, "write");
  append_field(out, std::to_string(writer));
  append_field(out, std::to_string(ts));
  append_field(out, value);
  return out;
}

}  // namespace asymq
