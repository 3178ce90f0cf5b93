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

#include "xmlsig.hpp"

#include "c14n.hpp"
#include "error.hpp"
#include "names.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace soapguard::sig {

using xml::Document;
using xml::Node;
using xml::NodeId;

namespace {

constexpr std::string_view account_id = "SoapAccount";

std::string str(std::string_view s) { return std::string(s); }

void declare_once(Node& n, const std::string& prefix, const std::string& uri) {
  for (const auto& d : n.namespaces())
    if (d.prefix == prefix)
      return;
  n.declare_namespace(prefix, uri);
}

Node& add_ds(Document& doc, Node& parent, const char* local) {
  return doc.append_child(parent, doc.create_element("ds", str(ns::ds), local));
}

Node& add_ds_alg(Document& doc, Node& parent, const char* local, std::string_view algorithm) {
  Node& n = add_ds(doc, parent, local);
  n.set_attribute("", xml::QName{"", "Algorithm"}, str(algorithm));
  return n;
}

void set_text(Document& doc, Node& element, std::string text) {
  while (element.child_count() > 0)
    doc.detach(element.child(0));
  doc.append_child(element, doc.create_text(std::move(text)));
}

const Node* ds_child(const Node& n, std::string_view local) { return n.first_child_element(ns::ds, local); }

std::string algorithm_of(const Node& n) {
  const std::string* a = n.attribute_value("", "Algorithm");
  return a ? *a : std::string();
}

[[noreturn]] void bad_shape(const std::string& what) {
  throw Error(ErrorCode::invalid_argument, "malformed ds:Signature: " + what);
}

bool encloses(const Node& outer, const Node& inner) {
  for (const Node* n = &inner; n; n = n->parent())
    if (n == &outer)
      return true;
  return false;
}

// Copy of `node` as the root of a new document, with every namespace binding
// in scope at the original position declared on the copy.
std::unique_ptr<Document> detach_copy(const Node& node) {
  Document scratch = Document::with_root("", "", "scratch");
  std::unique_ptr<Node> copy = scratch.import_subtree(node);
  auto out = std::make_unique<Document>(std::move(copy), scratch.next_id());
  Node& root = out->root();
  std::set<std::string> seen;
  for (const auto& d : root.namespaces())
    seen.insert(d.prefix);
  for (const Node* a = node.parent(); a; a = a->parent())
    for (const auto& d : a->namespaces())
      if (seen.insert(d.prefix).second)
        root.declare_namespace(d.prefix, d.uri);
  return out;
}

std::size_t in_scope_namespace_count(const Node& n) {
  std::set<std::string_view> prefixes{"xml"};
  for (const Node* a = &n; a; a = a->parent())
    for (const auto& d : a->namespaces())
      prefixes.insert(d.prefix);
  return prefixes.size();
}

// One evaluation of the filter expression with a node of `owner`'s
// node-set (the element itself, one of its namespace or attribute nodes, or
// one of its text children) as context: true when the context node or one
// of its ancestors is selected by the absolute path. Non-element context
// nodes are never selected themselves, so the ancestor walk starts at the
// owner element.
bool filter_test(const Document& doc, const xml::AbsolutePath& path, const Node& owner) {
  std::vector<const Node*> selected = xml::evaluate_path(doc, path);
  for (const Node* n = &owner; n; n = n->parent())
    if (std::find(selected.begin(), selected.end(), n) != selected.end())
      return true;
  return false;
}

std::string count_text(std::size_t n) { return std::to_string(n); }

std::optional<std::size_t> parse_count(const std::string& s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    return std::nullopt;
  return v;
}

struct SignatureSkeleton {
  Node* signature = nullptr;
  Node* signed_info = nullptr;
  std::vector<Node*> digest_values;
  Node* signature_value = nullptr;
};

SignatureSkeleton build_signature(Document& doc, Node& security, const std::vector<ReferenceTarget>& targets,
                                  const std::string& key_name) {
  SignatureSkeleton s;
  s.signature = &doc.append_child(security, doc.create_element("ds", str(ns::ds), "Signature"));
  s.signature->declare_namespace("ds", str(ns::ds));
  s.signed_info = &add_ds(doc, *s.signature, "SignedInfo");
  add_ds_alg(doc, *s.signed_info, "CanonicalizationMethod", alg::c14n);
  add_ds_alg(doc, *s.signed_info, "SignatureMethod", alg::ed25519);
  for (const ReferenceTarget& t : targets) {
    Node& ref = add_ds(doc, *s.signed_info, "Reference");
    Node& transforms = add_ds(doc, ref, "Transforms");
    if (const auto* id = std::get_if<IdTarget>(&t)) {
      ref.set_attribute("", xml::QName{"", "URI"}, "#" + id->id);
      add_ds_alg(doc, transforms, "Transform", alg::c14n);
    } else if (const auto* p = std::get_if<PathTarget>(&t)) {
      ref.set_attribute("", xml::QName{"", "URI"}, "");
      Node& tr = add_ds_alg(doc, transforms, "Transform", alg::xpath);
      Node& xp = add_ds(doc, tr, "XPath");
      // the expression carries its own namespace context
      for (const xml::PathStep& step : p->path.steps) {
        if (!step.prefix.empty())
          declare_once(xp, step.prefix, step.name.ns);
        if (step.predicate && !step.predicate->prefix.empty())
          declare_once(xp, step.predicate->prefix, step.predicate->attribute.ns);
      }
      doc.append_child(xp, doc.create_text(p->path.to_string()));
    } else {
      ref.set_attribute("", xml::QName{"", "URI"}, "");
      add_ds_alg(doc, transforms, "Transform", alg::exclude_signature);
    }
    add_ds_alg(doc, ref, "DigestMethod", alg::sha256);
    s.digest_values.push_back(&add_ds(doc, ref, "DigestValue"));
  }
  s.signature_value = &add_ds(doc, *s.signature, "SignatureValue");
  Node& key_info = add_ds(doc, *s.signature, "KeyInfo");
  Node& kn = add_ds(doc, key_info, "KeyName");
  doc.append_child(kn, doc.create_text(key_name));
  return s;
}

void finish_signature(Document& doc, SignatureSkeleton& s, const std::vector<crypto::DigestValue>& digests,
                      const crypto::KeyPair& key) {
  for (std::size_t i = 0; i < digests.size(); ++i)
    set_text(doc, *s.digest_values[i], crypto::base64_encode(digests[i].bytes));
  crypto::Signature value = sign_signed_info(*s.signed_info, key);
  set_text(doc, *s.signature_value, crypto::base64_encode(value));
}

Node& build_account_placeholder(Document& doc, Node& header, std::size_t after_index, std::size_t signatures,
                                std::size_t items) {
  soap::declare_on_root(doc, "wsu", ns::wsu);
  auto el = doc.create_element("sg", str(ns::sg), "SoapAccount");
  Node& acc = doc.insert_child(header, after_index, std::move(el));
  acc.declare_namespace("sg", str(ns::sg));
  acc.set_attribute("wsu", xml::QName{str(ns::wsu), "Id"}, str(account_id));
  auto add = [&](const char* local) -> Node& {
    return doc.append_child(acc, doc.create_element("sg", str(ns::sg), local));
  };
  add("HeaderDescendants");
  add("EnvelopeDescendants");
  for (std::size_t i = 0; i < signatures; ++i)
    add("ReferencesPerSignature");
  for (std::size_t i = 0; i < items; ++i)
    add("SignedItem");
  return acc;
}

void fill_account(Document& doc, Node& acc, const SoapAccount& a) {
  std::size_t sig = 0, item = 0;
  for (Node* c : acc.element_children()) {
    const std::string& local = c->name().local;
    if (local == "HeaderDescendants") {
      set_text(doc, *c, count_text(a.header_descendants));
    } else if (local == "EnvelopeDescendants") {
      set_text(doc, *c, count_text(a.envelope_descendants));
    } else if (local == "ReferencesPerSignature") {
      set_text(doc, *c, count_text(a.references_per_signature.at(sig++)));
    } else if (local == "SignedItem") {
      const LineageEntry& e = a.signed_item_lineage.at(item++);
      c->set_attribute("", xml::QName{"", "parentNs"}, e.parent.ns);
      c->set_attribute("", xml::QName{"", "parent"}, e.parent.local);
      c->set_attribute("", xml::QName{"", "childCount"}, count_text(e.child_count));
    }
  }
}

void check_targets(Strategy strategy, std::span<const ReferenceTarget> targets) {
  switch (strategy) {
  case Strategy::id:
  case Strategy::xpath: {
    if (targets.empty())
      throw Error(ErrorCode::invalid_argument, "sign: this strategy needs at least one target");
    for (const auto& t : targets) {
      bool ok = strategy == Strategy::id ? std::holds_alternative<IdTarget>(t) : std::holds_alternative<PathTarget>(t);
      if (!ok)
        throw Error(ErrorCode::invalid_argument,
                    std::string("sign: target ") + describe(t) + " does not fit strategy " + strategy_name(strategy));
    }
    break;
  }
  case Strategy::sesoap:
  case Strategy::inline_account:
    if (!targets.empty())
      throw Error(ErrorCode::invalid_argument,
                  std::string("sign: strategy ") + strategy_name(strategy) + " takes no target");
    break;
  }
}

} // namespace

const char* strategy_name(Strategy s) noexcept {
  switch (s) {
  case Strategy::id: return "ID";
  case Strategy::xpath: return "XPATH";
  case Strategy::sesoap: return "SESOAP";
  case Strategy::inline_account: return "INLINE_ACCOUNT";
  }
  return "?";
}

const char* strategy_flag(Strategy s) noexcept {
  switch (s) {
  case Strategy::id: return "id";
  case Strategy::xpath: return "xpath";
  case Strategy::sesoap: return "sesoap";
  case Strategy::inline_account: return "inline";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view text) noexcept {
  for (Strategy s : {Strategy::id, Strategy::xpath, Strategy::sesoap, Strategy::inline_account})
    if (text == strategy_flag(s) || text == strategy_name(s))
      return s;
  return std::nullopt;
}

std::string describe(const ReferenceTarget& t) {
  if (const auto* id = std::get_if<IdTarget>(&t))
    return "#" + id->id;
  if (const auto* p = std::get_if<PathTarget>(&t))
    return p->path.to_string();
  return "(whole envelope)";
}

std::vector<const Node*> find_signatures(const Document& doc) {
  std::vector<const Node*> out;
  xml::walk(doc.root(), [&](const Node& n) {
    if (n.is(ns::ds, "Signature"))
      out.push_back(&n);
    return true;
  });
  return out;
}

SignatureBlock read_signature(const Node& signature) {
  if (!signature.is(ns::ds, "Signature"))
    bad_shape("element is not ds:Signature");
  // The signature schema has no mixed content: text belongs only in the
  // value-carrying leaves.
  xml::walk(signature, [](const Node& n) {
    if (n.is_text()) {
      const Node* p = n.parent();
      if (!(p->is(ns::ds, "SignatureValue") || p->is(ns::ds, "DigestValue") || p->is(ns::ds, "KeyName") ||
            p->is(ns::ds, "XPath")))
        bad_shape("unexpected text inside " + p->qualified_name());
    }
    return true;
  });
  SignatureBlock b;
  b.node = signature.id();
  const Node* si = ds_child(signature, "SignedInfo");
  if (!si)
    bad_shape("no SignedInfo");
  b.signed_info_node = si->id();
  if (const Node* cm = ds_child(*si, "CanonicalizationMethod"))
    b.signed_info.canonicalization_method = algorithm_of(*cm);
  if (const Node* sm = ds_child(*si, "SignatureMethod"))
    b.signed_info.signature_method = algorithm_of(*sm);
  for (const Node* r : si->element_children()) {
    if (!r->is(ns::ds, "Reference"))
      continue;
    Reference ref;
    const std::string* uri = r->attribute_value("", "URI");
    ref.uri = uri ? *uri : std::string();
    const Node* xpath = nullptr;
    if (const Node* trs = ds_child(*r, "Transforms"))
      for (const Node* t : trs->element_children()) {
        if (!t->is(ns::ds, "Transform"))
          continue;
        ref.transforms.push_back(algorithm_of(*t));
        if (ref.transforms.back() == alg::xpath)
          xpath = ds_child(*t, "XPath");
      }
    if (!ref.uri.empty() && ref.uri[0] == '#') {
      ref.target = IdTarget{ref.uri.substr(1)};
    } else if (ref.uri.empty() && xpath) {
      ref.target = PathTarget{xml::parse_path(xpath->text_content(), xml::scope_resolver(*xpath))};
    } else if (ref.uri.empty() && std::find(ref.transforms.begin(), ref.transforms.end(), alg::exclude_signature) !=
                                      ref.transforms.end()) {
      ref.target = WholeEnvelope{};
    } else {
      bad_shape("reference URI '" + ref.uri + "' has no supported target form");
    }
    if (const Node* dm = ds_child(*r, "DigestMethod"))
      ref.digest_method = algorithm_of(*dm);
    ref.digest.algorithm = ref.digest_method;
    const Node* dv = ds_child(*r, "DigestValue");
    auto bytes = dv ? crypto::base64_decode(dv->text_content()) : std::nullopt;
    if (!bytes || bytes->size() != crypto::digest_size)
      bad_shape("reference '" + ref.uri + "' has no valid DigestValue");
    std::copy(bytes->begin(), bytes->end(), ref.digest.bytes.begin());
    b.signed_info.references.push_back(std::move(ref));
  }
  if (b.signed_info.references.empty())
    bad_shape("SignedInfo holds no Reference");
  const Node* sv = ds_child(signature, "SignatureValue");
  auto value = sv ? crypto::base64_decode(sv->text_content()) : std::nullopt;
  if (!value)
    bad_shape("no valid SignatureValue");
  b.signature_value = std::move(*value);
  if (const Node* ki = ds_child(signature, "KeyInfo"))
    if (const Node* kn = ds_child(*ki, "KeyName"))
      b.key_name = kn->text_content();
  return b;
}

std::vector<const Node*> xpath_filter(const Document& doc, const xml::AbsolutePath& path) {
  std::vector<const Node*> selected_elements;
  xml::walk(doc.root(), [&](const Node& n) {
    if (n.is_element()) {
      bool in = filter_test(doc, path, n);
      // The element's namespace and attribute nodes are part of the input
      // node-set and are tested on their own, as the filter prescribes.
      std::size_t extra = in_scope_namespace_count(n) + n.attributes().size();
      for (std::size_t i = 0; i < extra; ++i)
        filter_test(doc, path, n);
      if (in)
        selected_elements.push_back(&n);
    } else if (n.parent()) {
      filter_test(doc, path, *n.parent());
    }
    return true;
  });
  std::vector<const Node*> apexes;
  for (const Node* n : selected_elements)
    if (!n->parent() ||
        std::find(selected_elements.begin(), selected_elements.end(), n->parent()) == selected_elements.end())
      apexes.push_back(n);
  return apexes;
}

Dereferenced dereference(const Document& doc, const ReferenceTarget& target) {
  Dereferenced out;
  if (const auto* id = std::get_if<IdTarget>(&target)) {
    out.resolved = xml::find_by_id(doc, id->id);
    if (!out.resolved)
      throw Error(ErrorCode::target_not_found, "no element with wsu:Id '" + id->id + "'");
    out.detached = detach_copy(*out.resolved);
  } else if (const auto* p = std::get_if<PathTarget>(&target)) {
    auto apexes = xpath_filter(doc, p->path);
    if (apexes.empty())
      throw Error(ErrorCode::target_not_found, "path " + p->path.to_string() + " selects nothing");
    if (apexes.size() > 1)
      throw Error(ErrorCode::ambiguous_path,
                  "path " + p->path.to_string() + " selects " + std::to_string(apexes.size()) + " elements");
    out.resolved = apexes.front();
    out.detached = detach_copy(*out.resolved);
  } else {
    out.resolved = &doc.root();
  }
  return out;
}

crypto::DigestValue digest_content(const Dereferenced& content, std::span<const NodeId> excluded) {
  std::string bytes;
  if (content.detached)
    xml::canonicalize_into(bytes, content.detached->root());
  else
    xml::canonicalize_into(bytes, *content.resolved, excluded);
  crypto::DigestValue d = crypto::digest(bytes);
  d.algorithm = str(alg::sha256);
  return d;
}

crypto::Signature sign_signed_info(const Node& signed_info, const crypto::KeyPair& key) {
  std::string bytes;
  xml::canonicalize_into(bytes, signed_info);
  return key.sign(bytes);
}

void sign_in_place(soap::Envelope& env, Strategy strategy, std::span<const ReferenceTarget> targets,
                   const crypto::KeyPair& key) {
  check_targets(strategy, targets);
  Document& doc = env.doc();
  if (!find_signatures(doc).empty())
    throw Error(ErrorCode::already_signed, "envelope already carries a ds:Signature");

  // Targets are resolved and digested before the document is touched, so a
  // failing target leaves the envelope unchanged.
  std::vector<Dereferenced> resolved;
  std::vector<crypto::DigestValue> digests;
  if (strategy == Strategy::id || strategy == Strategy::xpath)
    for (const auto& t : targets) {
      resolved.push_back(dereference(doc, t));
      digests.push_back(digest_content(resolved.back()));
    }
  const Node* home = env.security() ? env.security() : env.header(); // where the signature will go
  for (std::size_t i = 0; i < resolved.size(); ++i)
    if (resolved[i].resolved == &doc.root() || (home && encloses(*resolved[i].resolved, *home)))
      throw Error(ErrorCode::invalid_argument, "sign: target " + describe(targets[i]) + " encloses the signature");

  NodeId sec_id = soap::ensure_security_header(env);
  Node& security = *doc.find(sec_id);

  if (strategy == Strategy::id || strategy == Strategy::xpath) {
    std::vector<ReferenceTarget> refs(targets.begin(), targets.end());
    SignatureSkeleton s = build_signature(doc, security, refs, key.name());
    finish_signature(doc, s, digests, key);
    return;
  }

  if (strategy == Strategy::sesoap) {
    // No signature exists yet, so the plain canonical form equals the
    // canonical form with the signature excluded.
    digests.push_back(digest_content(dereference(doc, WholeEnvelope{})));
    SignatureSkeleton s = build_signature(doc, security, {WholeEnvelope{}}, key.name());
    finish_signature(doc, s, digests, key);
    return;
  }

  // Inline account: lay out the complete structure first, then count.
  Node* body = env.body();
  if (!body)
    throw Error(ErrorCode::target_not_found, "sign: envelope has no soap:Body");
  std::string body_id;
  if (const std::string* id = xml::wsu_id(*body)) {
    body_id = *id;
  } else {
    body_id = "Body";
    soap::assign_id(env, body->id(), body_id);
  }
  if (xml::find_by_id(doc, account_id))
    throw Error(ErrorCode::already_signed, "envelope already carries a SOAP account");
  std::vector<ReferenceTarget> refs{IdTarget{body_id}, IdTarget{str(account_id)}};
  SignatureSkeleton s = build_signature(doc, security, refs, key.name());
  Node& header = *env.header();
  Node& acc = build_account_placeholder(doc, header, security.index_in_parent() + 1, 1, refs.size());
  fill_account(doc, acc, compute_soap_account(env));
  for (const auto& t : refs)
    digests.push_back(digest_content(dereference(doc, t)));
  finish_signature(doc, s, digests, key);
}

soap::Envelope sign(const soap::Envelope& env, Strategy strategy, std::span<const ReferenceTarget> targets,
                    const crypto::KeyPair& key) {
  soap::Envelope copy = env;
  sign_in_place(copy, strategy, targets, key);
  return copy;
}

std::vector<ReferenceTarget> reference_targets(const Node& signature) {
  std::vector<ReferenceTarget> out;
  const Node* si = ds_child(signature, "SignedInfo");
  if (!si)
    return out;
  for (const Node* r : si->element_children()) {
    if (!r->is(ns::ds, "Reference"))
      continue;
    const std::string* uri = r->attribute_value("", "URI");
    if (uri && !uri->empty() && (*uri)[0] == '#') {
      out.push_back(IdTarget{uri->substr(1)});
      continue;
    }
    std::optional<ReferenceTarget> t;
    if (const Node* trs = ds_child(*r, "Transforms"))
      for (const Node* tr : trs->element_children()) {
        std::string a = algorithm_of(*tr);
        if (a == alg::xpath) {
          if (const Node* xp = ds_child(*tr, "XPath")) {
            try {
              t = PathTarget{xml::parse_path(xp->text_content(), xml::scope_resolver(*xp))};
            } catch (const Error&) {
            }
          }
        } else if (a == alg::exclude_signature && !t) {
          t = WholeEnvelope{};
        }
      }
    if (t)
      out.push_back(std::move(*t));
  }
  return out;
}

const Node* locate(const Document& doc, const ReferenceTarget& t) {
  if (const auto* id = std::get_if<IdTarget>(&t))
    return xml::find_by_id(doc, id->id);
  if (const auto* p = std::get_if<PathTarget>(&t)) {
    auto hits = xml::evaluate_path(doc, p->path);
    return hits.size() == 1 ? hits.front() : nullptr;
  }
  return &doc.root();
}

std::vector<const Node*> signed_nodes(const Document& doc) {
  std::vector<const Node*> out;
  for (const Node* s : find_signatures(doc))
    for (const auto& t : reference_targets(*s))
      if (const Node* n = locate(doc, t))
        out.push_back(n);
  return out;
}

bool is_covered(const Document& doc, const Node& node) {
  auto nodes = signed_nodes(doc);
  for (const Node* n = &node; n; n = n->parent())
    if (std::find(nodes.begin(), nodes.end(), n) != nodes.end())
      return true;
  return false;
}

SoapAccount compute_soap_account(const soap::Envelope& env) {
  const Document& doc = env.doc();
  const Node* header = env.header();
  auto sigs = find_signatures(doc);
  if (!header || sigs.empty())
    throw Error(ErrorCode::no_signature, "SOAP account needs a header and at least one signature");
  SoapAccount a;
  a.header_descendants = xml::count_descendants(*header);
  a.envelope_descendants = xml::count_descendants(doc.root());
  for (const Node* s : sigs) {
    // Signatures under construction have no digest values yet, so only the
    // reference targets are read.
    auto targets = reference_targets(*s);
    for (const auto& t : targets) {
      LineageEntry e;
      if (const Node* item = locate(doc, t)) {
        if (item->parent())
          e.parent = item->parent()->name();
        e.child_count = item->element_children().size();
      }
      a.signed_item_lineage.push_back(std::move(e));
    }
    a.references_per_signature.push_back(targets.size());
  }
  return a;
}

const Node* find_soap_account(const Document& doc) {
  const Node* found = nullptr;
  xml::walk(doc.root(), [&](const Node& n) {
    if (n.is(ns::sg, "SoapAccount")) {
      found = &n;
      return false;
    }
    return true;
  });
  return found;
}

std::optional<SoapAccount> read_soap_account(const Node& element) {
  if (!element.is(ns::sg, "SoapAccount"))
    return std::nullopt;
  SoapAccount a;
  bool have_header = false, have_envelope = false;
  for (const Node* c : element.element_children()) {
    const std::string& local = c->name().local;
    if (local == "SignedItem") {
      const std::string* pns = c->attribute_value("", "parentNs");
      const std::string* p = c->attribute_value("", "parent");
      const std::string* cc = c->attribute_value("", "childCount");
      auto n = cc ? parse_count(*cc) : std::nullopt;
      if (!pns || !p || !n)
        return std::nullopt;
      a.signed_item_lineage.push_back({xml::QName{*pns, *p}, *n});
      continue;
    }
    auto n = parse_count(c->text_content());
    if (!n)
      return std::nullopt;
    if (local == "HeaderDescendants") {
      a.header_descendants = *n;
      have_header = true;
    } else if (local == "EnvelopeDescendants") {
      a.envelope_descendants = *n;
      have_envelope = true;
    } else if (local == "ReferencesPerSignature") {
      a.references_per_signature.push_back(*n);
    }
  }
  if (!have_header || !have_envelope)
    return std::nullopt;
  return a;
}

Strategy detect_strategy(const Document& doc, const SignatureBlock& block) {
  bool account_ref = false, path = false, whole = false;
  for (const auto& r : block.signed_info.references) {
    if (const auto* id = std::get_if<IdTarget>(&r.target); id && id->id == account_id)
      account_ref = true;
    path = path || std::holds_alternative<PathTarget>(r.target);
    whole = whole || std::holds_alternative<WholeEnvelope>(r.target);
  }
  if (account_ref || find_soap_account(doc))
    return Strategy::inline_account;
  if (path)
    return Strategy::xpath;
  if (whole)
    return Strategy::sesoap;
  return Strategy::id;
}

namespace {

// Exactly one of key and trust is used: the trust store when given.
VerificationReport verify_with(const soap::Envelope& env, const crypto::PublicKey* key,
                               const crypto::TrustStore* trust) {
  const Document& doc = env.doc();
  auto sigs = find_signatures(doc);
  if (sigs.empty())
    throw Error(ErrorCode::no_signature, "envelope carries no ds:Signature");
  VerificationReport report;
  report.valid = true;
  for (const Node* s : sigs) {
    SignatureCheck check;
    check.signature = s->id();
    SignatureBlock block;
    try {
      block = read_signature(*s);
    } catch (const Error& e) {
      check.problem = e.what();
      report.signatures.push_back(std::move(check));
      report.valid = false;
      continue;
    }
    check.key_name = block.key_name;
    const crypto::PublicKey* pk = key;
    if (trust) {
      pk = trust->find(block.key_name);
      if (!pk)
        throw Error(ErrorCode::unknown_key, "key name '" + block.key_name + "' is not in the trust store");
    }
    check.strategy = detect_strategy(doc, block);
    const Node* si = doc.find(block.signed_info_node);
    std::string si_bytes;
    xml::canonicalize_into(si_bytes, *si);
    check.signature_value_ok = block.signed_info.canonicalization_method == alg::c14n &&
                               block.signed_info.signature_method == alg::ed25519 &&
                               crypto::verify_signature(*pk, si_bytes, block.signature_value);
    bool refs_ok = true;
    std::vector<NodeId> excluded{s->id()};
    for (const auto& ref : block.signed_info.references) {
      ReferenceCheck rc;
      rc.uri = ref.uri;
      rc.target = ref.target;
      try {
        Dereferenced d = dereference(doc, ref.target);
        rc.resolved = d.resolved->id();
        if (ref.digest_method != alg::sha256) {
          rc.problem = "unsupported digest method '" + ref.digest_method + "'";
        } else {
          rc.digest_ok = digest_content(d, excluded).bytes == ref.digest.bytes;
          if (!rc.digest_ok)
            rc.problem = "digest mismatch";
        }
      } catch (const Error& e) {
        rc.problem = e.what();
      }
      refs_ok = refs_ok && rc.digest_ok;
      check.references.push_back(std::move(rc));
    }
    bool account_ok = true;
    if (check.strategy == Strategy::inline_account) {
      const Node* acc = xml::find_by_id(doc, account_id);
      std::optional<SoapAccount> stored = acc ? read_soap_account(*acc) : std::nullopt;
      if (!stored) {
        account_ok = false;
        check.problem = "no readable SOAP account";
      } else {
        SoapAccount now = compute_soap_account(env);
        account_ok = now == *stored;
        if (!account_ok)
          check.problem = "SOAP account counts differ from the message";
      }
      check.account_ok = account_ok;
    }
    check.valid = check.signature_value_ok && refs_ok && account_ok;
    report.valid = report.valid && check.valid;
    report.signatures.push_back(std::move(check));
  }
  return report;
}

} // namespace

VerificationReport verify(const soap::Envelope& env, const crypto::KeyPair& key, const crypto::TrustStore* trust) {
  return verify_with(env, &key.public_key(), trust);
}

VerificationReport verify(const soap::Envelope& env, const crypto::TrustStore& trust) {
  return verify_with(env, nullptr, &trust);
}

} // namespace soapguard::sig
