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

#include "soap.hpp"

#include "error.hpp"
#include "names.hpp"

namespace soapguard::soap {

using xml::Node;
using xml::NodeId;

namespace {

template <typename N> N* root_child(N& root, std::string_view local) {
  if (!root.is(ns::soap, "Envelope"))
    return nullptr;
  for (std::size_t i = 0; i < root.child_count(); ++i)
    if (root.child(i).is(ns::soap, local))
      return &root.child(i);
  return nullptr;
}

} // namespace

const Node* Envelope::header() const noexcept { return root_child(doc_.root(), "Header"); }
Node* Envelope::header() noexcept { return root_child(doc_.root(), "Header"); }
const Node* Envelope::body() const noexcept { return root_child(doc_.root(), "Body"); }
Node* Envelope::body() noexcept { return root_child(doc_.root(), "Body"); }

const Node* Envelope::security() const noexcept {
  const Node* h = header();
  return h ? h->first_child_element(ns::wsse, "Security") : nullptr;
}

Node* Envelope::security() noexcept {
  Node* h = header();
  return h ? h->first_child_element(ns::wsse, "Security") : nullptr;
}

std::optional<NodeId> Envelope::header_node() const noexcept {
  const Node* n = header();
  return n ? std::optional(n->id()) : std::nullopt;
}

std::optional<NodeId> Envelope::body_node() const noexcept {
  const Node* n = body();
  return n ? std::optional(n->id()) : std::nullopt;
}

std::optional<NodeId> Envelope::security_node() const noexcept {
  const Node* n = security();
  return n ? std::optional(n->id()) : std::nullopt;
}

std::string Envelope::to_string(int indent) const {
  return xml::serialize(doc_, {.xml_declaration = true, .indent = indent});
}

HeaderEntry header_entry(const Node& element) {
  HeaderEntry e;
  e.node = element.id();
  if (const std::string* mu = element.attribute_value(ns::soap, "mustUnderstand"))
    e.must_understand = !(*mu == "0" || *mu == "false");
  if (const std::string* r = element.attribute_value(ns::soap, "role"))
    e.role = *r;
  return e;
}

void declare_on_root(xml::Document& doc, const std::string& prefix, std::string_view uri) {
  const std::string* cur = doc.root().lookup_namespace(prefix);
  if (cur && *cur == uri)
    return;
  doc.root().declare_namespace(prefix, std::string(uri));
}

Envelope build_envelope(const Node& payload, std::span<const Node* const> headers) {
  if (!payload.is_element())
    throw Error(ErrorCode::invalid_argument, "build_envelope: body payload must be an element");
  auto doc = xml::Document::with_root("soap", std::string(ns::soap), "Envelope");
  Node& root = doc.root();
  root.declare_namespace("soap", std::string(ns::soap));
  root.declare_namespace("wsse", std::string(ns::wsse));
  root.declare_namespace("wsu", std::string(ns::wsu));
  Node& header = doc.append_child(root, doc.create_element("soap", std::string(ns::soap), "Header"));
  for (const Node* h : headers)
    doc.append_child(header, doc.import_subtree(*h));
  Node& body = doc.append_child(root, doc.create_element("soap", std::string(ns::soap), "Body"));
  doc.append_child(body, doc.import_subtree(payload));
  return Envelope(std::move(doc));
}

NodeId ensure_security_header(Envelope& env) {
  if (Node* s = env.security())
    return s->id();
  xml::Document& doc = env.doc();
  if (!doc.root().is(ns::soap, "Envelope"))
    throw Error(ErrorCode::invalid_argument, "ensure_security_header: root is not soap:Envelope");
  Node* header = env.header();
  if (!header)
    header = &doc.insert_child(doc.root(), 0, doc.create_element("soap", std::string(ns::soap), "Header"));
  declare_on_root(doc, "wsse", ns::wsse);
  Node& sec = doc.insert_child(*header, 0, doc.create_element("wsse", std::string(ns::wsse), "Security"));
  return sec.id();
}

void assign_id(Envelope& env, NodeId id, const std::string& value) {
  Node* n = env.doc().find(id);
  if (!n || !n->is_element())
    throw Error(ErrorCode::node_not_in_document, "assign_id: no such element in the envelope");
  declare_on_root(env.doc(), "wsu", ns::wsu);
  std::string prefix = "wsu";
  if (const xml::Attribute* existing = n->find_attribute(ns::wsu, "Id"))
    prefix = existing->prefix;
  n->set_attribute(prefix, xml::QName{std::string(ns::wsu), "Id"}, value);
}

const char* violation_name(StructureViolation::Kind kind) noexcept {
  switch (kind) {
  case StructureViolation::Kind::wrong_root: return "WrongRoot";
  case StructureViolation::Kind::missing_body: return "MissingBody";
  case StructureViolation::Kind::duplicate_body: return "DuplicateBody";
  case StructureViolation::Kind::duplicate_header: return "DuplicateHeader";
  case StructureViolation::Kind::header_after_body: return "HeaderAfterBody";
  case StructureViolation::Kind::misplaced_body: return "MisplacedBody";
  }
  return "?";
}

std::vector<StructureViolation> validate_envelope(const Envelope& env) {
  using K = StructureViolation::Kind;
  std::vector<StructureViolation> out;
  const Node& root = env.doc().root();
  if (!root.is(ns::soap, "Envelope")) {
    out.push_back({K::wrong_root, root.id(),
                   "root element is {" + root.name().ns + "}" + root.name().local + ", not soap:Envelope"});
    return out;
  }
  const Node* first_body = nullptr;
  const Node* first_header = nullptr;
  for (std::size_t i = 0; i < root.child_count(); ++i) {
    const Node& c = root.child(i);
    if (c.is(ns::soap, "Body")) {
      if (first_body)
        out.push_back({K::duplicate_body, c.id(), "more than one soap:Body under the envelope"});
      else
        first_body = &c;
    } else if (c.is(ns::soap, "Header")) {
      if (first_header)
        out.push_back({K::duplicate_header, c.id(), "more than one soap:Header under the envelope"});
      else
        first_header = &c;
      if (first_body)
        out.push_back({K::header_after_body, c.id(), "soap:Header follows soap:Body"});
    }
  }
  if (!first_body)
    out.push_back({K::missing_body, std::nullopt, "envelope has no soap:Body"});
  xml::walk(root, [&](const Node& n) {
    if (&n != &root && n.is(ns::soap, "Body") && n.parent() != &root) {
      std::string where = n.parent() ? n.parent()->qualified_name() : "?";
      out.push_back({K::misplaced_body, n.id(), "soap:Body found inside <" + where + ">"});
    }
    return true;
  });
  return out;
}

} // namespace soapguard::soap
