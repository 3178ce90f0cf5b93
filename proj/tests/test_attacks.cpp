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

#include "doctest.h"

#include "attacks.hpp"
#include "c14n.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "names.hpp"
#include "support.hpp"
#include "xmlsig.hpp"

#include <algorithm>

using namespace soapguard;
using attacks::AttackKind;
using sig::Strategy;

namespace {

const crypto::KeyPair& key = test::test_key();

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io;
}

std::string canon(const soap::Envelope& env) { return xml::canonicalize(env.doc().root(), env.doc()); }

soap::Envelope signed_fixture(const char* name, Strategy s) {
  soap::Envelope env = test::load_fixture(name);
  return sig::sign(env, s, harness::default_targets(env, s), key);
}

// Canonical SignedInfo plus SignatureValue text of the first signature.
std::string signature_core(const soap::Envelope& env) {
  auto sigs = sig::find_signatures(env.doc());
  REQUIRE(!sigs.empty());
  sig::SignatureBlock b = sig::read_signature(*sigs[0]);
  return xml::canonicalize(*env.doc().find(b.signed_info_node), env.doc()) +
         crypto::base64_encode(b.signature_value);
}

bool contains(const std::vector<xml::NodeId>& v, xml::NodeId id) { return std::find(v.begin(), v.end(), id) != v.end(); }

} // namespace

TEST_CASE("simple_ancestry: Fig. 3 golden") {
  soap::Envelope pre = test::load_fixture("fig3_pre.xml");
  soap::Envelope s = sig::sign(pre, Strategy::id, std::vector<sig::ReferenceTarget>{sig::IdTarget{"CMPE"}}, key);
  auto payload = attacks::default_payload();
  attacks::AttackResult r = attacks::simple_ancestry(s, payload.root(), "newCMPE");
  CHECK(canon(r.doc) == canon(test::load_fixture("fig3_attacked.xml")));
  CHECK(sig::verify(r.doc, key).valid);

  auto bodies = xml::evaluate_path(r.doc.doc(), xml::parse_path("/soap:Envelope/soap:Body"));
  REQUIRE(bodies.size() == 1);
  CHECK(*xml::wsu_id(*bodies[0]) == "newCMPE");
  CHECK(contains(r.moved, *s.body_node()));
  CHECK(r.injected.size() >= 1);
  CHECK_FALSE(r.intent.empty());
}

TEST_CASE("simple_ancestry: requires a signed body") {
  auto payload = attacks::default_payload();
  CHECK(code_of([&] { attacks::simple_ancestry(test::load_fixture("skeleton.xml"), payload.root(), "x"); }) ==
        ErrorCode::no_signed_body);
  soap::Envelope only_reply = sig::sign(test::load_fixture("fig4_pre.xml"), Strategy::id,
                                        std::vector<sig::ReferenceTarget>{sig::IdTarget{"theReplyTo"}}, key);
  CHECK(code_of([&] { attacks::simple_ancestry(only_reply, payload.root(), "x"); }) == ErrorCode::no_signed_body);
}

TEST_CASE("optional_element: Fig. 4 golden and receiver view") {
  soap::Envelope s = sig::sign(test::load_fixture("fig4_pre.xml"), Strategy::id,
                               std::vector<sig::ReferenceTarget>{sig::IdTarget{"CMPE"}, sig::IdTarget{"theReplyTo"}}, key);
  attacks::AttackResult r = attacks::optional_element(s, "ReplyTo");
  CHECK(canon(r.doc) == canon(test::load_fixture("fig4_attacked.xml")));
  CHECK(canon(attacks::optional_element(s, "wsa:ReplyTo").doc) == canon(r.doc));
  CHECK(sig::verify(r.doc, key).valid);

  harness::ProcessedMessage pm = harness::application_view(r.doc);
  const xml::Node* reply = xml::find_by_id(r.doc.doc(), "theReplyTo");
  REQUIRE(reply);
  CHECK_FALSE(contains(pm.headers, reply->id()));
  CHECK(contains(pm.skipped, reply->parent()->id()));

  CHECK(code_of([&] { attacks::optional_element(s, "wsa:To"); }) == ErrorCode::header_not_found);
}

TEST_CASE("sibling_value: timestamp leaves the signature's Security") {
  soap::Envelope s = signed_fixture("base.xml", Strategy::id);
  attacks::AttackResult r = attacks::sibling_value(s);
  const xml::Node* ts = xml::find_by_id(r.doc.doc(), "TS");
  REQUIRE(ts);
  const xml::Node* sec = r.doc.security();
  REQUIRE(sec);
  CHECK(ts->parent() != sec);
  CHECK(sec->first_child_element(ns::wsu, "Timestamp") == nullptr);
  CHECK(sig::verify(r.doc, key).valid);

  CHECK_FALSE(sig::verify(attacks::sibling_value(signed_fixture("base.xml", Strategy::sesoap)).doc, key).valid);
  CHECK(code_of([] { attacks::sibling_value(signed_fixture("fig3_pre.xml", Strategy::id)); }) ==
        ErrorCode::no_timestamp);
}

TEST_CASE("sibling_order: swap, identity and guards") {
  soap::Envelope s = signed_fixture("base.xml", Strategy::id);
  const xml::Node& group = attacks::signed_sibling_group(s);
  CHECK(group.name().local == "TransferBatch");

  std::size_t swap[] = {1, 0};
  attacks::AttackResult r = attacks::sibling_order(s, swap);
  CHECK(sig::verify(r.doc, key).valid);
  const xml::Node* g = r.doc.doc().find(group.id());
  REQUIRE(g);
  CHECK(*xml::wsu_id(*g->element_children()[0]) == "transfer-2");
  CHECK(*xml::wsu_id(*g->element_children()[1]) == "transfer-1");

  std::size_t identity[] = {0, 1};
  CHECK(canon(attacks::sibling_order(s, identity).doc) == canon(s));

  soap::Envelope ses = signed_fixture("base.xml", Strategy::sesoap);
  CHECK_FALSE(sig::verify(attacks::sibling_order(ses, swap).doc, key).valid);

  std::size_t repeated[] = {0, 0};
  std::size_t too_long[] = {0, 1, 2};
  CHECK(code_of([&] { attacks::sibling_order(s, repeated); }) == ErrorCode::bad_permutation);
  CHECK(code_of([&] { attacks::sibling_order(s, too_long); }) == ErrorCode::bad_permutation);
  CHECK(code_of([&] { attacks::sibling_order(signed_fixture("fig3_pre.xml", Strategy::id), swap); }) ==
        ErrorCode::not_enough_signed_siblings);
}

TEST_CASE("count_preserving_simple: account unchanged, malicious body processed") {
  for (const char* name : {"fig3_pre.xml", "base.xml"}) {
    CAPTURE(name);
    soap::Envelope s = signed_fixture(name, Strategy::inline_account);
    sig::SoapAccount before = sig::compute_soap_account(s);
    auto payload = attacks::default_payload();
    attacks::AttackResult r = attacks::count_preserving_simple(s, payload.root(), "newCMPE");
    CHECK(sig::compute_soap_account(r.doc) == before);
    CHECK(sig::verify(r.doc, key).valid);
    harness::ProcessedMessage pm = harness::application_view(r.doc);
    const xml::Node* body = r.doc.doc().find(pm.body);
    REQUIRE(body);
    CHECK(xml::serialize(*body).find("Symbol=\"MBI\"") != std::string::npos);
    // plain wrapping is caught by the same account
    CHECK_FALSE(sig::verify(attacks::simple_ancestry(s, payload.root(), "newCMPE").doc, key).valid);
  }
}

TEST_CASE("count_preserving_simple: guards") {
  auto payload = attacks::default_payload();
  CHECK(code_of([&] {
          attacks::count_preserving_simple(signed_fixture("fig3_pre.xml", Strategy::sesoap), payload.root(), "n");
        }) == ErrorCode::no_soap_account);
  // a payload far larger than anything that can be pruned
  std::string big = "<big>";
  for (int i = 0; i < 60; ++i)
    big += "<x/>";
  big += "</big>";
  xml::Document huge = xml::parse(big);
  CHECK(code_of([&] {
          attacks::count_preserving_simple(signed_fixture("fig3_pre.xml", Strategy::inline_account), huge.root(), "n");
        }) == ErrorCode::cannot_preserve_counts);
}

TEST_CASE("attacks are pure and never touch SignedInfo or SignatureValue") {
  auto payload = attacks::default_payload();
  for (Strategy st : harness::all_strategies) {
    soap::Envelope s = signed_fixture("base.xml", st);
    const std::string before = s.to_string();
    const std::string core = signature_core(s);
    for (AttackKind a : attacks::all_attacks) {
      CAPTURE(sig::strategy_name(st));
      CAPTURE(attacks::attack_name(a));
      std::optional<attacks::AttackResult> r;
      try {
        switch (a) {
        case AttackKind::simple_ancestry: r = attacks::simple_ancestry(s, payload.root(), "newCMPE"); break;
        case AttackKind::optional_element: r = attacks::optional_element(s, "wsa:ReplyTo"); break;
        case AttackKind::sibling_value: r = attacks::sibling_value(s); break;
        case AttackKind::sibling_order: {
          std::size_t swap[] = {1, 0};
          r = attacks::sibling_order(s, swap);
          break;
        }
        case AttackKind::count_preserving_simple:
          r = attacks::count_preserving_simple(s, payload.root(), "newCMPE");
          break;
        }
      } catch (const Error&) {
        // precondition not met for this strategy
      }
      CHECK(s.to_string() == before);
      if (r) {
        CHECK(signature_core(r->doc) == core);
        CHECK(canon(r->doc) != canon(s));
      }
    }
  }
}

TEST_CASE("attack names parse both spellings") {
  for (AttackKind a : attacks::all_attacks) {
    CHECK(attacks::parse_attack(attacks::attack_name(a)) == a);
    CHECK(attacks::parse_attack(attacks::attack_flag(a)) == a);
  }
  CHECK_FALSE(attacks::parse_attack("xml-bomb"));
}
