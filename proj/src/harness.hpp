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

#ifndef SOAPGUARD_HARNESS_HPP
#define SOAPGUARD_HARNESS_HPP

#include "attacks.hpp"
#include "crypto.hpp"
#include "xmlsig.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace soapguard::harness {

/// What the receiving application actually acts on.
struct ProcessedMessage {
  xml::NodeId body{};                   // the one Body directly under Envelope
  std::vector<xml::NodeId> headers;     // processed header entries, document order
  std::vector<xml::NodeId> skipped;     // skipped header entries, document order

  friend bool operator==(const ProcessedMessage&, const ProcessedMessage&) = default;
};

/// Receiver model. Header entries are the Header's element children plus
/// the children of every processed wsse:Security. An entry is skipped when
/// its role is none, or when it is marked mustUnderstand="0" and the
/// receiver does not know the element; a skipped entry takes its children
/// with it.
/// Errors: AmbiguousBody (zero or several Bodies under Envelope).
ProcessedMessage application_view(const soap::Envelope& env);

struct Outcome {
  bool signature_valid = false;
  bool mismatch = false; // a reference resolved to something the application does not process
  bool intent_met = false;
  bool succeeded = false;
};

enum class Verdict { vulnerable, detected, not_applicable };

const char* verdict_name(Verdict v) noexcept;
std::optional<Verdict> parse_verdict(std::string_view text) noexcept;

/// Targets each strategy signs on an unsigned envelope: ID signs every
/// element with a wsu:Id, XPATH signs the same elements through their
/// absolute paths, SESOAP and INLINE_ACCOUNT take none.
std::vector<sig::ReferenceTarget> default_targets(const soap::Envelope& env, sig::Strategy strategy);

/// Signed order of the individually signed siblings, kept by the receiver
/// side because the signature itself does not record it.
struct OrderManifest {
  xml::NodeId group{};
  std::vector<std::string> ids;
};

OrderManifest record_order(const soap::Envelope& signed_env);

/// Whether the application meets the signed siblings in a different order.
bool order_changed(const soap::Envelope& env, const OrderManifest& manifest);

/// Sign `base`, attack it, verify, then run the receiver model.
/// Errors: NotApplicable when the attack's precondition does not hold for
/// what this strategy signs.
Outcome attack_outcome(sig::Strategy strategy, attacks::AttackKind attack, const soap::Envelope& base,
                       const crypto::KeyPair& key);

struct MatrixCell {
  sig::Strategy strategy{};
  attacks::AttackKind attack{};
  Verdict verdict = Verdict::not_applicable;
  Outcome outcome;
};

struct DefenseMatrix {
  std::vector<MatrixCell> cells; // strategy-major, in the order requested

  std::optional<Verdict> verdict(sig::Strategy s, attacks::AttackKind a) const;
};

DefenseMatrix defense_matrix(std::span<const sig::Strategy> strategies, std::span<const attacks::AttackKind> attacks,
                             const soap::Envelope& base, const crypto::KeyPair& key);

inline constexpr sig::Strategy all_strategies[] = {sig::Strategy::id, sig::Strategy::xpath, sig::Strategy::sesoap,
                                                   sig::Strategy::inline_account};

/// One line per strategy, one column per attack.
std::string render_matrix_table(const DefenseMatrix& m);

/// Tab-separated, one record per cell, with a header row:
/// strategy, attack, verdict, signature_valid, intent_met, mismatch.
std::string render_matrix_machine(const DefenseMatrix& m);

/// Verdicts read from the machine form (extra columns are ignored; blank
/// lines and lines starting with '#' are skipped).
/// Errors: InvalidArgument on unknown names.
std::map<std::pair<std::string, std::string>, std::string> parse_matrix_verdicts(std::string_view text);

/// Human-readable differences between expected and actual verdicts; empty
/// when they agree cell for cell.
std::vector<std::string> diff_matrix(std::string_view expected_machine, const DefenseMatrix& actual);

struct PolicyReport {
  static constexpr const char* check_names[4] = {
      "signature in ultimateReceiver Security header",
      "Body referenced by absolute path",
      "Timestamp and ReplyTo referenced by absolute path",
      "signing key trusted",
  };
  std::array<bool, 4> passed{};
  std::array<std::string, 4> detail;
  bool overall = false;
};

/// The four-point receiver policy, checked against the first signature.
/// Errors: NoSignature.
PolicyReport check_policy(const soap::Envelope& env, const crypto::TrustStore& trust);

std::string render_policy(const PolicyReport& r);

/// Location of an element as its ancestor chain, e.g.
/// /soap:Envelope/soap:Header/Wrapper/soap:Body.
std::string location_of(const xml::Node& node);

/// References whose resolved node the application does not process: a
/// Body other than the processed one, or anything inside a skipped header
/// entry. Empty when the receiver model cannot run (ambiguous Body).
std::vector<std::string> mismatch_warnings(const soap::Envelope& env, const sig::VerificationReport& report);

/// Per-signature verdict, each reference with the node it resolved to, and
/// the mismatch warnings. `machine` selects tab-separated records
/// (kind, signature, strategy, uri, resolved, status) over prose.
std::string render_verification(const soap::Envelope& env, const sig::VerificationReport& report, bool machine);

/// The end-to-end story on an unsigned envelope with a Body id: sign by id,
/// wrap the Body, verify (valid, but resolved elsewhere), sign the whole
/// envelope instead, wrap again, verify (invalid). Returns the transcript.
std::string demo_transcript(const soap::Envelope& unsigned_env, const std::string& body_id,
                            const crypto::KeyPair& key);

} // namespace soapguard::harness

#endif
