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

#ifndef SOAPGUARD_ATTACKS_HPP
#define SOAPGUARD_ATTACKS_HPP

#include "soap.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Signature wrapping attacks. Each one is a pure transformation: the input
// envelope is left alone and the attacked copy comes back with the ids of
// the nodes that were moved or injected. No attack ever touches SignedInfo
// or SignatureValue.
namespace soapguard::attacks {

enum class AttackKind { simple_ancestry, optional_element, sibling_value, sibling_order, count_preserving_simple };

inline constexpr AttackKind all_attacks[] = {AttackKind::simple_ancestry, AttackKind::optional_element,
                                             AttackKind::sibling_value, AttackKind::sibling_order,
                                             AttackKind::count_preserving_simple};

const char* attack_name(AttackKind a) noexcept; // "SIMPLE_ANCESTRY", ...
const char* attack_flag(AttackKind a) noexcept; // "simple", ...
std::optional<AttackKind> parse_attack(std::string_view text) noexcept;

struct AttackResult {
  soap::Envelope doc;
  std::vector<xml::NodeId> moved;
  std::vector<xml::NodeId> injected;
  std::string intent;
};

/// The original Body goes into a Wrapper (mustUnderstand "0", role none)
/// appended to the Header; a new Body with wsu:Id `new_id` holding a copy of
/// `payload` takes its place under the Envelope.
/// Errors: NoSignedBody when no signature covers the Body.
AttackResult simple_ancestry(const soap::Envelope& env, const xml::Node& payload, const std::string& new_id);

/// Moves a signed header element into a Wrapper (mustUnderstand "0", role
/// none) appended inside wsse:Security. `target` is "prefix:local" or a bare
/// local name; the first covered header element that matches is taken.
/// Errors: HeaderNotFound.
AttackResult optional_element(const soap::Envelope& env, std::string_view target);

/// Moves the signed wsu:Timestamp out of the signature's Security header
/// into a second wsse:Security header (mustUnderstand "0", role none) placed
/// right after it. The receiver skips that header, so the timestamp is never
/// enforced.
/// Errors: NoTimestamp.
AttackResult sibling_value(const soap::Envelope& env);

/// The first element (document order) with at least two signed element
/// children carrying wsu:Id.
/// Errors: NotEnoughSignedSiblings.
const xml::Node& signed_sibling_group(const soap::Envelope& env);

/// Reorders the signed siblings of signed_sibling_group(): the sibling at
/// position permutation[i] moves to position i. Other children keep their
/// slots.
/// Errors: NotEnoughSignedSiblings; BadPermutation.
AttackResult sibling_order(const soap::Envelope& env, std::span<const std::size_t> permutation);

/// Simple ancestry against an inline SOAP account: the original Body is
/// wrapped in an element named soap:Envelope so its lineage is unchanged,
/// unsigned header content is pruned (unsigned header entries, then KeyInfo,
/// then the Security wrapper itself) to make room, and empty role-none
/// fillers absorb any overshoot or pad the new Body.
/// Errors: NoSoapAccount; CannotPreserveCounts.
AttackResult count_preserving_simple(const soap::Envelope& env, const xml::Node& payload, const std::string& new_id);

/// Payload used by the sample fixtures and the defense matrix:
/// <getQuote Symbol="MBI"></getQuote>.
xml::Document default_payload();

} // namespace soapguard::attacks

#endif
