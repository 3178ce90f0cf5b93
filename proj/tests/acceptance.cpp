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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. `acceptance 2 5` runs a subset.

#include "attacks.hpp"
#include "bench.hpp"
#include "c14n.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "support.hpp"
#include "xmlsig.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

using namespace soapguard;
using attacks::AttackKind;
using harness::Verdict;
using sig::Strategy;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Result {
  bool passed = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

const crypto::KeyPair& key = test::test_key();

// -- 1 ---------------------------------------------------------------------

Result defense_matrix_reproduction() {
  auto t0 = Clock::now();
  harness::DefenseMatrix m =
      harness::defense_matrix(harness::all_strategies, attacks::all_attacks, test::load_fixture("base.xml"), key);
  double elapsed = seconds_since(t0);

  const AttackKind four[] = {AttackKind::simple_ancestry, AttackKind::optional_element, AttackKind::sibling_value,
                             AttackKind::sibling_order};
  struct Want {
    Strategy s;
    AttackKind a;
    Verdict v;
  };
  std::vector<Want> want;
  for (AttackKind a : four) {
    want.push_back({Strategy::id, a, Verdict::vulnerable});
    want.push_back({Strategy::sesoap, a, Verdict::detected});
  }
  want.push_back({Strategy::xpath, AttackKind::simple_ancestry, Verdict::detected});
  want.push_back({Strategy::xpath, AttackKind::optional_element, Verdict::detected});
  want.push_back({Strategy::xpath, AttackKind::sibling_value, Verdict::vulnerable});
  want.push_back({Strategy::xpath, AttackKind::sibling_order, Verdict::vulnerable});
  want.push_back({Strategy::inline_account, AttackKind::simple_ancestry, Verdict::detected});
  want.push_back({Strategy::inline_account, AttackKind::count_preserving_simple, Verdict::vulnerable});

  std::vector<std::string> wrong;
  for (const Want& w : want) {
    auto got = m.verdict(w.s, w.a);
    if (!got || *got != w.v)
      wrong.push_back(std::string(sig::strategy_name(w.s)) + "/" + attacks::attack_name(w.a) + " is " +
                      (got ? harness::verdict_name(*got) : "missing"));
  }
  auto golden = harness::diff_matrix(test::read_fixture("expected_matrix.tsv"), m);
  for (const auto& d : golden)
    wrong.push_back("golden: " + d);

  Result r;
  r.passed = wrong.empty() && elapsed < 10.0;
  r.detail = std::to_string(want.size()) + " stated cells and the shipped golden, " + fmt(elapsed, 3) + " s";
  for (const auto& w : wrong)
    r.detail += "; " + w;
  if (elapsed >= 10.0)
    r.detail += "; over the 10 s budget";
  return r;
}

// -- 2 ---------------------------------------------------------------------

// One mutation applied to a copy of the signed document.
struct Mutation {
  std::string what;
  std::function<void(xml::Document&)> apply;
};

std::size_t node_count(const xml::Node& root) {
  std::size_t n = 0;
  xml::walk(root, [&](const xml::Node&) {
    ++n;
    return true;
  });
  return n;
}

std::vector<Mutation> mutations_outside(const xml::Document& doc, xml::NodeId signature) {
  std::vector<Mutation> out;
  std::vector<const xml::Node*> nodes;
  std::function<void(const xml::Node&)> collect = [&](const xml::Node& n) {
    if (n.id() == signature)
      return;
    nodes.push_back(&n);
    for (std::size_t i = 0; i < n.child_count(); ++i)
      collect(n.child(i));
  };
  collect(doc.root());
  for (const xml::Node* n : nodes) {
    const xml::NodeId id = n->id();
    const std::string where = harness::location_of(n->is_element() ? *n : *n->parent()) +
                              (n->is_text() ? "/text()[" + std::to_string(n->index_in_parent()) + "]" : "");
    if (n->parent())
      out.push_back({"delete " + where, [id](xml::Document& d) { d.detach(*d.find(id)); }});
    if (n->is_text()) {
      out.push_back({"append to " + where, [id](xml::Document& d) {
                       xml::Node& t = *d.find(id);
                       t.set_text(t.text() + "x");
                     }});
      out.push_back({"replace " + where, [id](xml::Document& d) { d.find(id)->set_text("mutated"); }});
      continue;
    }
    for (std::size_t i = 0; i <= n->child_count(); ++i) {
      out.push_back({"insert element at " + where + "[" + std::to_string(i) + "]", [id, i](xml::Document& d) {
                       d.insert_child(*d.find(id), i, d.create_element("", "", "injected"));
                     }});
      out.push_back({"insert text at " + where + "[" + std::to_string(i) + "]", [id, i](xml::Document& d) {
                       d.insert_child(*d.find(id), i, d.create_text("x"));
                     }});
    }
    for (std::size_t i = 0; i + 1 < n->child_count(); ++i) {
      if (n->child(i).id() == signature || n->child(i + 1).id() == signature)
        continue;
      out.push_back({"swap children " + std::to_string(i) + "," + std::to_string(i + 1) + " of " + where,
                     [id, i](xml::Document& d) {
                       xml::Node& p = *d.find(id);
                       auto moved = d.detach(p.child(i + 1));
                       d.insert_child(p, i, std::move(moved));
                     }});
    }
    for (const auto& a : n->attributes()) {
      const std::string an = a.prefix.empty() ? a.name.local : a.prefix + ":" + a.name.local;
      const xml::QName qn = a.name;
      const std::string prefix = a.prefix;
      const std::string value = a.value;
      out.push_back({"edit @" + an + " of " + where, [id, qn, prefix, value](xml::Document& d) {
                       d.find(id)->set_attribute(prefix, qn, value + "x");
                     }});
      out.push_back({"remove @" + an + " of " + where,
                     [id, qn](xml::Document& d) { d.find(id)->remove_attribute(qn.ns, qn.local); }});
    }
    out.push_back({"add @mutated to " + where,
                   [id](xml::Document& d) { d.find(id)->set_attribute("", xml::QName{"", "mutated"}, "1"); }});
  }
  return out;
}

Result sesoap_mutation_completeness() {
  auto t0 = Clock::now();
  crypto::TrustStore trust;
  trust.add(key);
  std::size_t fixtures = 0, randoms = 0, tried = 0, skipped_noop = 0;
  std::vector<std::string> escapes;

  auto exhaust = [&](const std::string& name, const soap::Envelope& env) {
    soap::Envelope signed_env = sig::sign(env, Strategy::sesoap, {}, key);
    const xml::NodeId signature = sig::find_signatures(signed_env.doc()).at(0)->id();
    const std::string original = xml::serialize(signed_env.doc());
    for (const Mutation& m : mutations_outside(signed_env.doc(), signature)) {
      xml::Document copy = signed_env.doc();
      m.apply(copy);
      if (xml::serialize(copy) == original) {
        ++skipped_noop; // e.g. swapping two identical siblings
        continue;
      }
      ++tried;
      bool valid = false;
      try {
        valid = sig::verify(soap::Envelope(std::move(copy)), trust).valid;
      } catch (const Error&) {
        valid = false; // no signature left: rejected
      }
      if (valid)
        escapes.push_back(name + ": " + m.what);
    }
  };

  for (const auto& entry : fs::directory_iterator(SOAPGUARD_TEST_FIXTURES)) {
    if (entry.path().extension() != ".xml")
      continue;
    soap::Envelope env = soap::Envelope::load(entry.path().string());
    // fixtures that already carry a signature are re-signed from scratch
    for (const xml::Node* s : sig::find_signatures(env.doc()))
      env.doc().detach(*env.doc().find(s->id()));
    if (node_count(env.doc().root()) > 200)
      continue;
    ++fixtures;
    exhaust(entry.path().filename().string(), env);
  }
  // the fixtures are small, so seeded random envelopes widen the net
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    soap::Envelope env = soap::Envelope::parse(test::RandomEnvelope(seed).text());
    if (node_count(env.doc().root()) > 200)
      continue;
    ++randoms;
    exhaust("random seed " + std::to_string(seed), env);
  }

  double elapsed = seconds_since(t0);
  Result r;
  r.passed = fixtures > 0 && escapes.empty() && elapsed < 120.0;
  r.detail = std::to_string(tried) + " mutations over " + std::to_string(fixtures) + " fixtures and " +
             std::to_string(randoms) + " random envelopes, " + std::to_string(escapes.size()) + " escapes (" +
             std::to_string(skipped_noop) + " no-op swaps skipped), " + fmt(elapsed) + " s";
  for (std::size_t i = 0; i < escapes.size() && i < 5; ++i)
    r.detail += "; " + escapes[i];
  return r;
}

// -- 3 ---------------------------------------------------------------------

std::string quote(const std::string& s) { return "'" + s + "'"; }

int run_cli(const std::string& args) {
  std::string cmd = quote(SOAPGUARD_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Result golden_equality() {
  fs::path tmp = fs::temp_directory_path() / ("soapguard-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  auto fx = [](const char* n) { return quote(test::fixture_path(n)); };
  auto at = [&](const char* n) { return quote((tmp / n).string()); };
  struct Case {
    const char* name;
    std::string sign;
    std::string attack;
    const char* golden;
  };
  const Case cases[] = {
      {"Fig. 3", "sign --strategy id --target CMPE --in " + fx("fig3_pre.xml") + " --out " + at("fig3_signed.xml"),
       "attack --attack simple --in " + at("fig3_signed.xml") + " --out " + at("fig3_out.xml"), "fig3_attacked.xml"},
      {"Fig. 4",
       "sign --strategy id --target CMPE --target theReplyTo --in " + fx("fig4_pre.xml") + " --out " +
           at("fig4_signed.xml"),
       "attack --attack optional --target wsa:ReplyTo --in " + at("fig4_signed.xml") + " --out " + at("fig4_out.xml"),
       "fig4_attacked.xml"},
  };
  Result r;
  r.passed = true;
  for (const Case& c : cases) {
    int s = run_cli(c.sign);
    int a = s == 0 ? run_cli(c.attack) : -1;
    bool equal = false;
    if (a == 0) {
      std::string out = c.golden == std::string("fig3_attacked.xml") ? "fig3_out.xml" : "fig4_out.xml";
      soap::Envelope got = soap::Envelope::load((tmp / out).string());
      soap::Envelope want = test::load_fixture(c.golden);
      equal = xml::canonicalize(got.doc().root(), got.doc()) == xml::canonicalize(want.doc().root(), want.doc());
    }
    r.passed = r.passed && equal;
    if (!r.detail.empty())
      r.detail += ", ";
    r.detail += std::string(c.name) + (equal ? " equal" : " differs (sign exit " + std::to_string(s) +
                                                              ", attack exit " + std::to_string(a) + ")");
  }
  std::error_code ec;
  fs::remove_all(tmp, ec);
  r.detail += " (canonical bytes of the attack command output vs the checked-in goldens)";
  return r;
}

// -- 4 ---------------------------------------------------------------------

Result benchmark_trends() {
  auto t0 = Clock::now();
  bench::BenchConfig cfg; // default ladder, 20 repetitions
  Result r;
  try {
    auto records = bench::run_benchmark(cfg, key);
    bench::TrendReport t = bench::check_trends(records);
    double elapsed = seconds_since(t0);
    r.passed = t.all_passed() && elapsed < 300.0;
    r.detail = std::to_string(records.size()) + " cells, " + std::to_string(cfg.repetitions) + " repetitions, " +
               fmt(elapsed, 1) + " s at " + std::to_string(t.size_bytes) + " B";
    for (std::size_t i = 0; i < t.claims.size(); ++i)
      r.detail += "; (" + std::string(1, static_cast<char>('a' + i)) + ") " + (t.claims[i].passed ? "ok" : "FAILED") +
                  " " + t.claims[i].measured;
    if (elapsed >= 300.0)
      r.detail += "; over the 5 minute budget";
  } catch (const Error& e) {
    r.detail = e.what();
  }
  return r;
}

// -- 5 ---------------------------------------------------------------------

Result round_trip_invariants() {
  auto t0 = Clock::now();
  std::size_t fix = 0, perm = 0, verified = 0;
  std::vector<std::string> failures;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    test::RandomEnvelope gen(seed);
    const std::string text = gen.text();
    try {
      xml::Document d1 = xml::parse(text);
      const std::string s1 = xml::serialize(d1);
      const std::string s2 = xml::serialize(xml::parse(s1));
      if (s1 == s2)
        ++fix;
      else
        failures.push_back("seed " + std::to_string(seed) + ": serialize fixpoint");

      const std::string c = xml::canonicalize(d1.root(), d1);
      bool same = true;
      for (std::uint64_t k = 1; k <= 3; ++k) {
        xml::Document dp = xml::parse(gen.text(seed * 31 + k));
        same = same && xml::canonicalize(dp.root(), dp) == c;
      }
      if (same)
        ++perm;
      else
        failures.push_back("seed " + std::to_string(seed) + ": c14n depends on attribute order");

      soap::Envelope env{std::move(d1)};
      if (!xml::wsu_id(*env.body()))
        soap::assign_id(env, *env.body_node(), "body-signed");
      bool all = true;
      for (Strategy s : harness::all_strategies) {
        soap::Envelope signed_env = sig::sign(env, s, harness::default_targets(env, s), key);
        // reparse the wire form so verification does not see the signer's tree
        soap::Envelope wire = soap::Envelope::parse(signed_env.to_string(0));
        if (!sig::verify(wire, key).valid) {
          all = false;
          failures.push_back("seed " + std::to_string(seed) + ": " + sig::strategy_name(s) + " does not verify");
        }
      }
      verified += all ? 1 : 0;
    } catch (const Error& e) {
      failures.push_back("seed " + std::to_string(seed) + ": " + e.what());
    }
  }
  double elapsed = seconds_since(t0);
  Result r;
  r.passed = failures.empty() && elapsed < 60.0;
  r.detail = "1000 envelopes: fixpoint " + std::to_string(fix) + ", permutation-stable c14n " + std::to_string(perm) +
             ", sign/verify x4 " + std::to_string(verified) + ", " + fmt(elapsed) + " s";
  for (std::size_t i = 0; i < failures.size() && i < 5; ++i)
    r.detail += "; " + failures[i];
  return r;
}

// -- 6 ---------------------------------------------------------------------

Result policy_examples() {
  crypto::TrustStore trust;
  trust.add(key);
  soap::Envelope id_signed = sig::sign(test::load_fixture("fig3_pre.xml"), Strategy::id,
                                       std::vector<sig::ReferenceTarget>{sig::IdTarget{"CMPE"}}, key);
  harness::PolicyReport a = harness::check_policy(id_signed, trust);
  bool first = !a.passed[1] && !a.overall;

  std::vector<sig::ReferenceTarget> paths;
  for (const char* p : {"/soap:Envelope/soap:Body", "/soap:Envelope/soap:Header/wsse:Security/wsu:Timestamp",
                        "/soap:Envelope/soap:Header/wsa:ReplyTo"})
    paths.push_back(sig::PathTarget{xml::parse_path(p)});
  soap::Envelope compliant = sig::sign(test::load_fixture("base.xml"), Strategy::xpath, paths, key);
  bool second = harness::check_policy(compliant, trust).overall;

  soap::Envelope attacked = attacks::sibling_value(compliant).doc;
  bool third = sig::verify(attacked, trust).valid;

  Result r;
  r.passed = first && second && third;
  r.detail = std::string("ID-signed Fig. 3 fails the path check: ") + (first ? "yes" : "NO") +
             "; compliant XPATH envelope passes: " + (second ? "yes" : "NO") +
             "; still verifier-valid after SIBLING_VALUE: " + (third ? "yes" : "NO");
  return r;
}

} // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int number;
    const char* title;
    Result (*run)();
  };
  const Criterion all[] = {
      {1, "defense matrix reproduction", defense_matrix_reproduction},
      {2, "SESOAP mutation completeness", sesoap_mutation_completeness},
      {3, "Fig. 3 / Fig. 4 golden equality", golden_equality},
      {4, "benchmark trends", benchmark_trends},
      {5, "round-trip and canonicalization invariants", round_trip_invariants},
      {6, "policy checker examples", policy_examples},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i)
    wanted.insert(std::atoi(argv[i]));
  bool ok = true;
  for (const Criterion& c : all) {
    if (!wanted.empty() && !wanted.count(c.number))
      continue;
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.detail = std::string("error: ") + e.what();
    }
    ok = ok && r.passed;
    std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " -- " << r.detail
              << std::endl;
  }
  return ok ? 0 : 1;
}
