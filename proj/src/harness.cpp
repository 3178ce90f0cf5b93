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

#include "harness.hpp"

#include "error.hpp"
#include "names.hpp"
#include "query.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace soapguard::harness {

using attacks::AttackKind;
using sig::Strategy;
using xml::Node;
using xml::NodeId;

namespace {

// Header elements the modelled receiver knows how to handle.
bool understood(const Node& n) {
  const std::string& u = n.name().ns;
  return u == ns::wsse || u == ns::wsu || u == ns::wsa || u == ns::ds || u == ns::ex || n.is(ns::sg, "SoapAccount");
}

bool skipped_entry(const Node& n) {
  soap::HeaderEntry e = soap::header_entry(n);
  if (e.role && role::is_none(*e.role))
    return true;
  return !e.must_understand && !understood(n);
}

bool contains_id(const std::vector<NodeId>& v, NodeId id) { return std::find(v.begin(), v.end(), id) != v.end(); }

bool inside_any(const Node& n, const std::vector<NodeId>& entries) {
  for (const Node* a = &n; a; a = a->parent())
    if (contains_id(entries, a->id()))
      return true;
  return false;
}

// Ids of the elements the application handles: the processed body subtree
// and the processed header entries (a processed Security's skipped children
// excluded).
std::set<NodeId> processed_nodes(const soap::Envelope& env, const ProcessedMessage& pm) {
  std::set<NodeId> out;
  auto add_subtree = [&](const Node& root) {
    xml::walk(root, [&](const Node& d) {
      if (d.id() != root.id() && contains_id(pm.skipped, d.id()))
        return true; // children of a skipped entry are not visited separately
      if (!inside_any(d, pm.skipped))
        out.insert(d.id());
      return true;
    });
  };
  if (const Node* b = env.doc().find(pm.body))
    add_subtree(*b);
  for (NodeId h : pm.headers)
    if (const Node* n = env.doc().find(h))
      add_subtree(*n);
  return out;
}

} // namespace

ProcessedMessage application_view(const soap::Envelope& env) {
  const Node& root = env.doc().root();
  ProcessedMessage pm;
  const Node* body = nullptr;
  std::size_t bodies = 0;
  if (root.is(ns::soap, "Envelope"))
    for (const Node* c : root.element_children())
      if (c->is(ns::soap, "Body")) {
        body = c;
        ++bodies;
      }
  if (bodies != 1)
    throw Error(ErrorCode::ambiguous_body,
                "application view: expected one soap:Body under the envelope, found " + std::to_string(bodies));
  pm.body = body->id();
  if (const Node* header = env.header())
    for (const Node* c : header->element_children()) {
      if (skipped_entry(*c)) {
        pm.skipped.push_back(c->id());
        continue;
      }
      pm.headers.push_back(c->id());
      if (c->is(ns::wsse, "Security"))
        for (const Node* s : c->element_children())
          (skipped_entry(*s) ? pm.skipped : pm.headers).push_back(s->id());
    }
  return pm;
}

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
  case Verdict::vulnerable: return "VULNERABLE";
  case Verdict::detected: return "DETECTED";
  case Verdict::not_applicable: return "NOT_APPLICABLE";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view text) noexcept {
  for (Verdict v : {Verdict::vulnerable, Verdict::detected, Verdict::not_applicable})
    if (text == verdict_name(v))
      return v;
  return std::nullopt;
}

std::vector<sig::ReferenceTarget> default_targets(const soap::Envelope& env, Strategy strategy) {
  std::vector<sig::ReferenceTarget> out;
  if (strategy == Strategy::sesoap || strategy == Strategy::inline_account)
    return out;
  xml::walk(env.doc().root(), [&](const Node& n) {
    if (const std::string* id = n.is_element() ? xml::wsu_id(n) : nullptr) {
      if (strategy == Strategy::id)
        out.push_back(sig::IdTarget{*id});
      else
        out.push_back(sig::PathTarget{xml::path_to(env.doc(), n)});
    }
    return true;
  });
  return out;
}

OrderManifest record_order(const soap::Envelope& signed_env) {
  const Node& group = attacks::signed_sibling_group(signed_env);
  auto nodes = sig::signed_nodes(signed_env.doc());
  OrderManifest m;
  m.group = group.id();
  for (const Node* c : group.element_children()) {
    const std::string* id = xml::wsu_id(*c);
    if (!id)
      continue;
    for (const Node* a = c; a; a = a->parent())
      if (std::find(nodes.begin(), nodes.end(), a) != nodes.end()) {
        m.ids.push_back(*id);
        break;
      }
  }
  return m;
}

bool order_changed(const soap::Envelope& env, const OrderManifest& manifest) {
  ProcessedMessage pm = application_view(env);
  std::set<NodeId> processed = processed_nodes(env, pm);
  std::vector<std::string> seen;
  xml::walk(env.doc().root(), [&](const Node& n) {
    if (!n.is_element() || !processed.count(n.id()))
      return true;
    if (const std::string* id = xml::wsu_id(n))
      if (std::find(manifest.ids.begin(), manifest.ids.end(), *id) != manifest.ids.end())
        seen.push_back(*id);
    return true;
  });
  return seen != manifest.ids;
}

Outcome attack_outcome(Strategy strategy, AttackKind attack, const soap::Envelope& base, const crypto::KeyPair& key) {
  auto targets = default_targets(base, strategy);
  soap::Envelope signed_env = sig::sign(base, strategy, targets, key);
  const NodeId original_body = signed_env.body_node().value_or(NodeId{});

  std::optional<attacks::AttackResult> result;
  std::optional<OrderManifest> manifest;
  try {
    switch (attack) {
    case AttackKind::simple_ancestry: {
      auto payload = attacks::default_payload();
      result = attacks::simple_ancestry(signed_env, payload.root(), "newCMPE");
      break;
    }
    case AttackKind::optional_element:
      result = attacks::optional_element(signed_env, "wsa:ReplyTo");
      break;
    case AttackKind::sibling_value:
      result = attacks::sibling_value(signed_env);
      break;
    case AttackKind::sibling_order: {
      manifest = record_order(signed_env);
      std::vector<std::size_t> reversed(manifest->ids.size());
      for (std::size_t i = 0; i < reversed.size(); ++i)
        reversed[i] = reversed.size() - 1 - i;
      result = attacks::sibling_order(signed_env, reversed);
      break;
    }
    case AttackKind::count_preserving_simple: {
      auto payload = attacks::default_payload();
      result = attacks::count_preserving_simple(signed_env, payload.root(), "newCMPE");
      break;
    }
    }
  } catch (const Error& e) {
    switch (e.code()) {
    case ErrorCode::no_signed_body:
    case ErrorCode::header_not_found:
    case ErrorCode::no_timestamp:
    case ErrorCode::not_enough_signed_siblings:
    case ErrorCode::no_soap_account:
      throw Error(ErrorCode::not_applicable, std::string(attacks::attack_name(attack)) + " does not apply to " +
                                                 sig::strategy_name(strategy) + ": " + e.what());
    default:
      throw;
    }
  }

  const soap::Envelope& attacked = result->doc;
  Outcome o;
  sig::VerificationReport report = sig::verify(attacked, key);
  o.signature_valid = report.valid;

  std::optional<ProcessedMessage> pm;
  try {
    pm = application_view(attacked);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ambiguous_body)
      throw;
  }
  if (pm) {
    for (const auto& sc : report.signatures)
      for (const auto& rc : sc.references) {
        const Node* n = rc.resolved ? attacked.doc().find(*rc.resolved) : nullptr;
        if (!n)
          continue;
        if ((n->is(ns::soap, "Body") && n->id() != pm->body) || inside_any(*n, pm->skipped))
          o.mismatch = true;
      }
    switch (attack) {
    case AttackKind::simple_ancestry:
    case AttackKind::count_preserving_simple:
      o.intent_met = pm->body != original_body;
      break;
    case AttackKind::optional_element:
    case AttackKind::sibling_value: {
      std::set<NodeId> processed = processed_nodes(attacked, *pm);
      o.intent_met = !processed.count(result->moved.front());
      break;
    }
    case AttackKind::sibling_order:
      o.intent_met = order_changed(attacked, *manifest);
      break;
    }
  }
  o.succeeded = o.signature_valid && o.intent_met;
  return o;
}

std::optional<Verdict> DefenseMatrix::verdict(Strategy s, AttackKind a) const {
  for (const auto& c : cells)
    if (c.strategy == s && c.attack == a)
      return c.verdict;
  return std::nullopt;
}

DefenseMatrix defense_matrix(std::span<const Strategy> strategies, std::span<const AttackKind> attacks,
                             const soap::Envelope& base, const crypto::KeyPair& key) {
  DefenseMatrix m;
  for (Strategy s : strategies)
    for (AttackKind a : attacks) {
      MatrixCell c{s, a, Verdict::not_applicable, {}};
      try {
        c.outcome = attack_outcome(s, a, base, key);
        c.verdict = c.outcome.succeeded ? Verdict::vulnerable : Verdict::detected;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::not_applicable)
          throw;
      }
      m.cells.push_back(c);
    }
  return m;
}

std::string render_matrix_table(const DefenseMatrix& m) {
  std::vector<Strategy> rows;
  std::vector<AttackKind> cols;
  for (const auto& c : m.cells) {
    if (std::find(rows.begin(), rows.end(), c.strategy) == rows.end())
      rows.push_back(c.strategy);
    if (std::find(cols.begin(), cols.end(), c.attack) == cols.end())
      cols.push_back(c.attack);
  }
  constexpr int first = 16, width = 25;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w)
      s.append(w - s.size(), ' ');
    return s;
  };
  std::ostringstream out;
  out << pad("", first);
  for (AttackKind a : cols)
    out << pad(attacks::attack_name(a), width);
  out << '\n';
  for (Strategy s : rows) {
    out << pad(sig::strategy_name(s), first);
    for (AttackKind a : cols) {
      auto v = m.verdict(s, a);
      out << pad(v ? verdict_name(*v) : "-", width);
    }
    out << '\n';
  }
  std::string text = out.str();
  // drop trailing padding on every line
  std::string trimmed;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    line.erase(line.find_last_not_of(' ') + 1);
    trimmed += line + '\n';
  }
  return trimmed;
}

std::string render_matrix_machine(const DefenseMatrix& m) {
  std::ostringstream out;
  out << "strategy\tattack\tverdict\tsignature_valid\tintent_met\tmismatch\n";
  for (const auto& c : m.cells) {
    bool na = c.verdict == Verdict::not_applicable;
    auto flag = [&](bool b) { return na ? "-" : (b ? "1" : "0"); };
    out << sig::strategy_name(c.strategy) << '\t' << attacks::attack_name(c.attack) << '\t'
        << verdict_name(c.verdict) << '\t' << flag(c.outcome.signature_valid) << '\t' << flag(c.outcome.intent_met)
        << '\t' << flag(c.outcome.mismatch) << '\n';
  }
  return out.str();
}

std::map<std::pair<std::string, std::string>, std::string> parse_matrix_verdicts(std::string_view text) {
  std::map<std::pair<std::string, std::string>, std::string> out;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#' || line.rfind("strategy\t", 0) == 0)
      continue;
    std::vector<std::string> cols;
    std::istringstream fields(line);
    for (std::string f; std::getline(fields, f, '\t');)
      cols.push_back(f);
    if (cols.size() < 3 || !sig::parse_strategy(cols[0]) || !attacks::parse_attack(cols[1]) ||
        !parse_verdict(cols[2]))
      throw Error(ErrorCode::invalid_argument, "matrix report line " + std::to_string(lineno) + " is not a record");
    out[{cols[0], cols[1]}] = cols[2];
  }
  return out;
}

std::vector<std::string> diff_matrix(std::string_view expected_machine, const DefenseMatrix& actual) {
  auto expected = parse_matrix_verdicts(expected_machine);
  auto got = parse_matrix_verdicts(render_matrix_machine(actual));
  std::vector<std::string> diff;
  for (const auto& [key, v] : expected) {
    auto it = got.find(key);
    std::string actual_v = it == got.end() ? "(missing)" : it->second;
    if (actual_v != v)
      diff.push_back(key.first + " x " + key.second + ": expected " + v + ", got " + actual_v);
  }
  for (const auto& [key, v] : got)
    if (!expected.count(key))
      diff.push_back(key.first + " x " + key.second + ": not in expected matrix, got " + v);
  return diff;
}

PolicyReport check_policy(const soap::Envelope& env, const crypto::TrustStore& trust) {
  auto sigs = sig::find_signatures(env.doc());
  if (sigs.empty())
    throw Error(ErrorCode::no_signature, "policy: envelope carries no ds:Signature");
  const Node& s = *sigs.front();
  const xml::Document& doc = env.doc();
  PolicyReport r;

  // 1. placement and role
  const Node* sec = s.parent();
  const std::string* role = sec ? sec->attribute_value(ns::soap, "role") : nullptr;
  r.passed[0] = sec && sec->is(ns::wsse, "Security") && role && role::is_ultimate_receiver(*role);
  r.detail[0] = !sec || !sec->is(ns::wsse, "Security") ? "signature is not inside wsse:Security"
                : !role                                 ? "Security header has no soap:role"
                                                        : "Security role is " + *role;

  // Path-referenced nodes of this signature.
  std::vector<const Node*> path_nodes;
  bool body_path = false;
  const Node* body = env.body();
  for (const auto& t : sig::reference_targets(s)) {
    const auto* p = std::get_if<sig::PathTarget>(&t);
    if (!p)
      continue;
    const Node* n = sig::locate(doc, t);
    if (n)
      path_nodes.push_back(n);
    const auto& steps = p->path.steps;
    if (steps.size() == 2 && steps[0].name.is(ns::soap, "Envelope") && steps[1].name.is(ns::soap, "Body") &&
        !steps[0].predicate && !steps[1].predicate && n && n == body)
      body_path = true;
  }

  // 2. Body through /soap:Envelope/soap:Body
  r.passed[1] = body_path;
  r.detail[1] = body_path ? "reference /soap:Envelope/soap:Body" : "no reference with path /soap:Envelope/soap:Body";

  // 3. every Timestamp / ReplyTo present must be path-referenced
  std::vector<std::string> missing;
  for (const char* text : {"/soap:Envelope/soap:Header/wsse:Security[@soap:role=\".../ultimateReceiver\"]/wsu:Timestamp",
                           "/soap:Envelope/soap:Header/wsa:ReplyTo"}) {
    auto path = xml::parse_path(text);
    for (const Node* n : xml::evaluate_path(doc, path))
      if (std::find(path_nodes.begin(), path_nodes.end(), n) == path_nodes.end())
        missing.push_back(n->qualified_name());
  }
  r.passed[2] = missing.empty();
  if (missing.empty()) {
    r.detail[2] = "all present elements are path-referenced";
  } else {
    r.detail[2] = "not path-referenced:";
    for (const auto& m : missing)
      r.detail[2] += " " + m;
  }

  // 4. key
  std::string key_name;
  if (const Node* ki = s.first_child_element(ns::ds, "KeyInfo"))
    if (const Node* kn = ki->first_child_element(ns::ds, "KeyName"))
      key_name = kn->text_content();
  r.passed[3] = !key_name.empty() && trust.contains(key_name);
  r.detail[3] = key_name.empty() ? "no KeyName" : (r.passed[3] ? "trusted: " : "unknown key: ") + key_name;

  r.overall = std::all_of(r.passed.begin(), r.passed.end(), [](bool b) { return b; });
  return r;
}

std::string render_policy(const PolicyReport& r) {
  std::ostringstream out;
  for (std::size_t i = 0; i < 4; ++i)
    out << (r.passed[i] ? "pass" : "FAIL") << "  " << (i + 1) << ". " << PolicyReport::check_names[i] << " ("
        << r.detail[i] << ")\n";
  out << (r.overall ? "policy satisfied" : "policy violated") << '\n';
  return out.str();
}

std::string location_of(const Node& node) {
  std::vector<const Node*> chain;
  for (const Node* n = &node; n; n = n->parent())
    chain.push_back(n);
  std::string out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    out += "/" + (*it)->qualified_name();
  return out;
}

std::vector<std::string> mismatch_warnings(const soap::Envelope& env, const sig::VerificationReport& report) {
  std::vector<std::string> out;
  std::optional<ProcessedMessage> pm;
  try {
    pm = application_view(env);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ambiguous_body)
      throw;
    return out;
  }
  for (const auto& sc : report.signatures)
    for (const auto& rc : sc.references) {
      const Node* n = rc.resolved ? env.doc().find(*rc.resolved) : nullptr;
      if (!n)
        continue;
      if (n->is(ns::soap, "Body") && n->id() != pm->body)
        out.push_back("reference " + sig::describe(rc.target) + " resolved to " + location_of(*n) +
                      ", but the application processes " + location_of(*env.doc().find(pm->body)));
      else if (inside_any(*n, pm->skipped))
        out.push_back("reference " + sig::describe(rc.target) + " resolved to " + location_of(*n) +
                      ", which the application skips");
    }
  return out;
}

std::string render_verification(const soap::Envelope& env, const sig::VerificationReport& report, bool machine) {
  std::ostringstream out;
  auto warnings = mismatch_warnings(env, report);
  if (machine)
    out << "kind\tsignature\tstrategy\turi\tresolved\tstatus\n";
  std::size_t index = 0;
  for (const auto& sc : report.signatures) {
    ++index;
    if (machine) {
      out << "signature\t" << index << '\t' << sig::strategy_name(sc.strategy) << "\t-\t-\t"
          << (sc.valid ? "valid" : "invalid") << '\n';
    } else {
      out << "signature " << index << " (" << sig::strategy_name(sc.strategy) << ", key " << sc.key_name
          << "): " << (sc.valid ? "valid" : "INVALID") << '\n';
      out << "  signature value: " << (sc.signature_value_ok ? "ok" : "bad") << '\n';
      if (sc.account_ok)
        out << "  soap account: " << (*sc.account_ok ? "ok" : "mismatch") << '\n';
      if (!sc.problem.empty())
        out << "  problem: " << sc.problem << '\n';
    }
    for (const auto& rc : sc.references) {
      const Node* n = rc.resolved ? env.doc().find(*rc.resolved) : nullptr;
      std::string where = n ? location_of(*n) : "(unresolved)";
      std::string status = rc.digest_ok ? "ok" : rc.problem;
      if (machine)
        out << "reference\t" << index << '\t' << sig::strategy_name(sc.strategy) << '\t'
            << sig::describe(rc.target) << '\t' << where << '\t' << status << '\n';
      else
        out << "  reference " << sig::describe(rc.target) << " -> " << where << ": " << status << '\n';
    }
  }
  for (const auto& w : warnings)
    out << (machine ? "warning\t-\t-\t-\t-\t" : "warning: ") << w << '\n';
  if (!machine)
    out << "overall: " << (report.valid ? "valid" : "INVALID") << '\n';
  return out.str();
}

std::string demo_transcript(const soap::Envelope& unsigned_env, const std::string& body_id,
                            const crypto::KeyPair& key) {
  std::ostringstream out;
  auto payload = attacks::default_payload();
  auto step = [&](int n, const std::string& what) { out << "== step " << n << ": " << what << " ==\n"; };

  step(1, "sign the Body by id (#" + body_id + ")");
  std::vector<sig::ReferenceTarget> by_id{sig::IdTarget{body_id}};
  soap::Envelope signed_id = sig::sign(unsigned_env, sig::Strategy::id, by_id, key);
  out << signed_id.to_string() << '\n';

  step(2, "attacker moves the signed Body into a Wrapper and injects a new Body");
  attacks::AttackResult a1 = attacks::simple_ancestry(signed_id, payload.root(), "new" + body_id);
  out << a1.doc.to_string() << '\n';

  step(3, "receiver verifies the id-signed message");
  sig::VerificationReport r1 = sig::verify(a1.doc, key);
  out << render_verification(a1.doc, r1, false);
  ProcessedMessage pm1 = application_view(a1.doc);
  out << "application processes " << location_of(*a1.doc.doc().find(pm1.body)) << " holding "
      << xml::serialize(*a1.doc.doc().find(pm1.body)->element_children().front()) << '\n';
  out << "=> signature " << (r1.valid ? "accepted" : "rejected") << ", injected request "
      << (r1.valid && pm1.body != *signed_id.body_node() ? "executed" : "not executed") << "\n\n";

  step(4, "sign the whole envelope instead (SESOAP)");
  soap::Envelope signed_ses = sig::sign(unsigned_env, sig::Strategy::sesoap, {}, key);
  out << signed_ses.to_string() << '\n';

  step(5, "attacker repeats the same wrapping");
  attacks::AttackResult a2 = attacks::simple_ancestry(signed_ses, payload.root(), "new" + body_id);
  out << a2.doc.to_string() << '\n';

  step(6, "receiver verifies the whole-envelope signature");
  sig::VerificationReport r2 = sig::verify(a2.doc, key);
  out << render_verification(a2.doc, r2, false);
  out << "=> signature " << (r2.valid ? "accepted" : "rejected") << ", injected request "
      << (r2.valid ? "executed" : "not executed") << '\n';
  return out.str();
}

} // namespace soapguard::harness
