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

#ifndef SOAPGUARD_XMLSIG_HPP
#define SOAPGUARD_XMLSIG_HPP

#include "crypto.hpp"
#include "query.hpp"
#include "soap.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace soapguard::sig {

/// How a signature points at what it protects.
///  - id:             one Reference per target, URI="#<wsu:Id>"; resolved by
///                    document-order-first id lookup.
///  - xpath:          one Reference per target, URI="" with an XPath filter
///                    transform holding an absolute path.
///  - sesoap:         a single Reference covering the whole envelope except
///                    the Signature element itself.
///  - inline_account: references the Body by id plus a signed SoapAccount
///                    header recording structural counts.
enum class Strategy { id, xpath, sesoap, inline_account };

const char* strategy_name(Strategy s) noexcept;          // "ID", "XPATH", ...
const char* strategy_flag(Strategy s) noexcept;          // "id", "xpath", ...
std::optional<Strategy> parse_strategy(std::string_view text) noexcept;

struct IdTarget {
  std::string id;
};
struct PathTarget {
  xml::AbsolutePath path;
};
struct WholeEnvelope {};

using ReferenceTarget = std::variant<IdTarget, PathTarget, WholeEnvelope>;

std::string describe(const ReferenceTarget& t);

struct Reference {
  ReferenceTarget target;
  std::string uri;
  std::vector<std::string> transforms;
  std::string digest_method;
  crypto::DigestValue digest;
};

struct SignedInfo {
  std::string canonicalization_method;
  std::string signature_method;
  std::vector<Reference> references;
};

/// Parsed ds:Signature element.
struct SignatureBlock {
  xml::NodeId node{};
  xml::NodeId signed_info_node{};
  SignedInfo signed_info;
  std::vector<std::uint8_t> signature_value;
  std::string key_name;
};

/// Every ds:Signature in document order.
std::vector<const xml::Node*> find_signatures(const xml::Document& doc);

/// Throws invalid_argument when the element does not have the expected
/// shape (missing SignedInfo, undecodable base64, unknown target form).
SignatureBlock read_signature(const xml::Node& signature);

/// Reference targets of a ds:Signature, read from the URI and transforms
/// only (digest values are not needed, so this also works on a signature
/// that is still being built). References with no recognisable target
/// form come back as WholeEnvelope only if they carry the exclusion
/// transform; otherwise they are skipped.
std::vector<ReferenceTarget> reference_targets(const xml::Node& signature);

/// Node a reference designates in the live document: find_by_id for ids,
/// the single evaluate_path hit for paths (nullptr when there is not
/// exactly one), the root for the whole envelope. No copy is made.
const xml::Node* locate(const xml::Document& doc, const ReferenceTarget& target);

/// Every node designated by a reference of any signature, in signature and
/// reference order. Unresolvable references are left out.
std::vector<const xml::Node*> signed_nodes(const xml::Document& doc);

/// Whether `node` is designated by a reference or lies inside such a node.
bool is_covered(const xml::Document& doc, const xml::Node& node);

// ---------------------------------------------------------------------------
// Signing pipeline, split into the phases that the benchmark times.

/// Referenced content ready to be digested. For id and path references the
/// target subtree is detached into its own document, carrying the in-scope
/// namespace declarations of its original position, so that transforms run
/// on a stable node-set instead of the live message. The whole-envelope
/// reference digests the live root directly.
struct Dereferenced {
  const xml::Node* resolved = nullptr; // node in the live document
  std::unique_ptr<xml::Document> detached;
};

/// Locate what a reference points to. Id targets use find_by_id; path
/// targets run an XPath filter over every node of the document; the whole
/// envelope resolves to the root without any search.
/// Throws TargetNotFound, or AmbiguousPath when a path selects several
/// subtrees.
Dereferenced dereference(const xml::Document& doc, const ReferenceTarget& target);

/// Subtree apexes selected by the XPath filter for `path`: every node of
/// the document node-set (elements, namespace nodes, attributes, text) is
/// tested with the expression, and selected elements whose parent is not
/// selected are returned in document order.
std::vector<const xml::Node*> xpath_filter(const xml::Document& doc, const xml::AbsolutePath& path);

/// Canonicalize and hash dereferenced content. `excluded` is only honoured
/// for the whole-envelope form.
crypto::DigestValue digest_content(const Dereferenced& content, std::span<const xml::NodeId> excluded = {});

/// Canonical SignedInfo bytes followed by the signature primitive.
crypto::Signature sign_signed_info(const xml::Node& signed_info, const crypto::KeyPair& key);

/// Signs a copy of `env`. Targets must be ids for ID, paths for XPATH and
/// empty for SESOAP and INLINE_ACCOUNT.
/// Errors: TargetNotFound, AmbiguousPath, AlreadySigned.
soap::Envelope sign(const soap::Envelope& env, Strategy strategy, std::span<const ReferenceTarget> targets,
                    const crypto::KeyPair& key);

/// Same as sign() but edits `env` in place; the benchmark uses this to keep
/// the document copy out of the timed region.
void sign_in_place(soap::Envelope& env, Strategy strategy, std::span<const ReferenceTarget> targets,
                   const crypto::KeyPair& key);

// ---------------------------------------------------------------------------
// SOAP account (inline method)

struct LineageEntry {
  xml::QName parent; // empty when the signed item is the root
  std::size_t child_count = 0;

  friend bool operator==(const LineageEntry&, const LineageEntry&) = default;
};

struct SoapAccount {
  std::size_t header_descendants = 0;
  std::size_t envelope_descendants = 0;
  std::vector<std::size_t> references_per_signature;
  std::vector<LineageEntry> signed_item_lineage;

  friend bool operator==(const SoapAccount&, const SoapAccount&) = default;
};

/// Counts taken from the current tree. Signed items are resolved with the
/// lookup of each reference's own strategy.
/// Errors: NoSignature (also when the envelope has no header).
SoapAccount compute_soap_account(const soap::Envelope& env);

const xml::Node* find_soap_account(const xml::Document& doc);
std::optional<SoapAccount> read_soap_account(const xml::Node& element);

// ---------------------------------------------------------------------------
// Verification

struct ReferenceCheck {
  std::string uri;
  ReferenceTarget target;
  std::optional<xml::NodeId> resolved;
  bool digest_ok = false;
  std::string problem;
};

struct SignatureCheck {
  xml::NodeId signature{};
  Strategy strategy = Strategy::id;
  std::string key_name;
  bool signature_value_ok = false;
  std::vector<ReferenceCheck> references;
  std::optional<bool> account_ok; // set for inline_account
  std::string problem;
  bool valid = false;
};

struct VerificationReport {
  std::vector<SignatureCheck> signatures;
  bool valid = false;
};

/// Checks every signature: SignatureValue under the public key, then each
/// reference re-resolved with the strategy's own lookup and re-digested;
/// for the inline method the SOAP account is recomputed as well.
/// When a trust store is given the KeyName must be in it and the stored
/// key is used; otherwise `key` is used.
/// Errors: NoSignature, UnknownKey.
VerificationReport verify(const soap::Envelope& env, const crypto::KeyPair& key,
                          const crypto::TrustStore* trust = nullptr);
/// Same, with every key taken from the trust store.
VerificationReport verify(const soap::Envelope& env, const crypto::TrustStore& trust);

/// Strategy inferred from the shape of a signature's references.
Strategy detect_strategy(const xml::Document& doc, const SignatureBlock& block);

} // namespace soapguard::sig

#endif
