/*
  Copyright 2026 The soapguard Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef SOAPGUARD_CRYPTO_HPP
#define SOAPGUARD_CRYPTO_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Hash and signature primitives. SHA-256 for digests, Ed25519 for
// signatures; both come from libsodium.
namespace soapguard::crypto {

inline constexpr std::size_t digest_size = 32;
inline constexpr std::size_t public_key_size = 32;
inline constexpr std::size_t signature_size = 64;

using Digest = std::array<std::uint8_t, digest_size>;
using PublicKey = std::array<std::uint8_t, public_key_size>;
using Signature = std::array<std::uint8_t, signature_size>;

struct DigestValue {
  Digest bytes{};
  std::string algorithm;

  friend bool operator==(const DigestValue&, const DigestValue&) = default;
};

DigestValue digest(std::string_view input);

class KeyPair {
public:
  // Deterministic for a non-empty seed; an empty seed draws a random key.
  static KeyPair generate(std::string_view seed);

  const PublicKey& public_key() const noexcept { return public_; }
  const std::string& name() const noexcept { return name_; }

  Signature sign(std::string_view message) const;

private:
  KeyPair() = default;

  PublicKey public_{};
  std::array<std::uint8_t, 64> secret_{};
  std::string name_;
};

bool verify_signature(const PublicKey& key, std::string_view message, std::span<const std::uint8_t> signature);

// KeyName label derived from the public key.
std::string key_name(const PublicKey& key);

/// Key names the verifier accepts, with the public key each one maps to.
class TrustStore {
public:
  void add(const KeyPair& key) { keys_[key.name()] = key.public_key(); }
  void add(std::string name, const PublicKey& key) { keys_[std::move(name)] = key; }
  const PublicKey* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

private:
  std::map<std::string, PublicKey, std::less<>> keys_;
};

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Whitespace inside the text is ignored. Returns nullopt on invalid input.
std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text);

std::string hex(std::span<const std::uint8_t> bytes);

} // namespace soapguard::crypto

#endif
