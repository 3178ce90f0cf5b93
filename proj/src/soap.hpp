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

#ifndef SOAPGUARD_SOAP_HPP
#define SOAPGUARD_SOAP_HPP

#include "xml.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace soapguard::soap {

/// A SOAP envelope: a document whose root should be soap:Envelope. Attacked
/// envelopes routinely break the skeleton rules, so construction never
/// validates; use validate_envelope() to ask.
class Envelope {
public:
  explicit Envelope(xml::Document doc) : doc_(std::move(doc)) {}

  static Envelope parse(std::string_view text) { return Envelope(xml::parse(text)); }
  static Envelope load(const std::string& path) { return Envelope(xml::load_file(path)); }

  const xml::Document& doc() const noexcept { return doc_; }
  xml::Document& doc() noexcept { return doc_; }

  // First soap:Header / soap:Body directly under the root.
  const xml::Node* header() const noexcept;
  xml::Node* header() noexcept;
  const xml::Node* body() const noexcept;
  xml::Node* body() noexcept;
  // First wsse:Security child of the header.
  const xml::Node* security() const noexcept;
  xml::Node* security() noexcept;

  std::optional<xml::NodeId> header_node() const noexcept;
  std::optional<xml::NodeId> body_node() const noexcept;
  std::optional<xml::NodeId> security_node() const noexcept;

  std::string to_string(int indent = 2) const;

private:
  xml::Document doc_;
};

struct HeaderEntry {
  xml::NodeId node{};
  bool must_understand = true; // false when soap:mustUnderstand is "0" or "false"
  std::optional<std::string> role;
};

HeaderEntry header_entry(const xml::Node& element);

/// Envelope with an (always present) Header holding copies of `headers` in
/// order and a Body holding a copy of `payload`.
Envelope build_envelope(const xml::Node& payload, std::span<const xml::Node* const> headers = {});

/// The wsse:Security child of the header, created (with the header) if it
/// does not exist yet. Calling it again returns the same node.
xml::NodeId ensure_security_header(Envelope& env);

/// Sets wsu:Id on an element of the envelope, overwriting an old value.
void assign_id(Envelope& env, xml::NodeId node, const std::string& id);

struct StructureViolation {
  enum class Kind {
    wrong_root,
    missing_body,
    duplicate_body,
    duplicate_header,
    header_after_body,
    misplaced_body, // a soap:Body somewhere other than directly under the root
  };
  Kind kind;
  std::optional<xml::NodeId> node;
  std::string message;
};

const char* violation_name(StructureViolation::Kind kind) noexcept;

std::vector<StructureViolation> validate_envelope(const Envelope& env);

// Declares prefix -> uri on the root unless the root already has it in scope.
void declare_on_root(xml::Document& doc, const std::string& prefix, std::string_view uri);

} // namespace soapguard::soap

#endif
