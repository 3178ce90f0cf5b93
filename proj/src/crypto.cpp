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

#include "crypto.hpp"

#include "error.hpp"
#include "names.hpp"

#include <sodium.h>

#include <mutex>

namespace soapguard::crypto {

namespace {

void init_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0)
      throw std::runtime_error("libsodium initialisation failed");
  });
}

const auto* as_bytes(std::string_view s) { return reinterpret_cast<const unsigned char*>(s.data()); }

} // namespace

DigestValue digest(std::string_view input) {
  init_sodium();
  DigestValue out;
  out.algorithm = std::string(alg::sha256);
  crypto_hash_sha256(out.bytes.data(), as_bytes(input), input.size());
  return out;
}

KeyPair KeyPair::generate(std::string_view seed) {
  init_sodium();
  static_assert(crypto_sign_PUBLICKEYBYTES == public_key_size);
  static_assert(crypto_sign_SECRETKEYBYTES == 64);
  static_assert(crypto_sign_SEEDBYTES == digest_size);
  KeyPair kp;
  if (seed.empty()) {
    crypto_sign_keypair(kp.public_.data(), kp.secret_.data());
  } else {
    // The seed string is stretched to the 32-byte Ed25519 seed with SHA-256.
    Digest s;
    crypto_hash_sha256(s.data(), as_bytes(seed), seed.size());
    crypto_sign_seed_keypair(kp.public_.data(), kp.secret_.data(), s.data());
    sodium_memzero(s.data(), s.size());
  }
  kp.name_ = key_name(kp.public_);
  return kp;
}

Signature KeyPair::sign(std::string_view message) const {
  Signature sig;
  crypto_sign_detached(sig.data(), nullptr, as_bytes(message), message.size(), secret_.data());
  return sig;
}

bool verify_signature(const PublicKey& key, std::string_view message, std::span<const std::uint8_t> signature) {
  init_sodium();
  if (signature.size() != signature_size)
    return false;
  return crypto_sign_verify_detached(signature.data(), as_bytes(message), message.size(), key.data()) == 0;
}

std::string key_name(const PublicKey& key) {
  return "sg-ed25519-" + hex(std::span<const std::uint8_t>(key.data(), 8));
}

const PublicKey* TrustStore::find(std::string_view name) const {
  auto it = keys_.find(name);
  return it == keys_.end() ? nullptr : &it->second;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  init_sodium();
  std::string out(sodium_base64_ENCODED_LEN(bytes.size(), sodium_base64_VARIANT_ORIGINAL), '\0');
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), sodium_base64_VARIANT_ORIGINAL);
  out.resize(out.size() - 1); // trailing NUL
  return out;
}

std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text) {
  init_sodium();
  std::vector<std::uint8_t> out(text.size());
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), " \t\r\n", &len, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0)
    return std::nullopt;
  if (end != text.data() + text.size())
    return std::nullopt;
  out.resize(len);
  return out;
}

std::string hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 0xF];
  }
  return out;
}

} // namespace soapguard::crypto
