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

// Helpers shared by the test binaries: fixture access, the test key, and a
// seeded random envelope generator that writes XML text on its own (it does
// not use the library's tree or serializer, so it can serve as an oracle).

#ifndef SOAPGUARD_TESTS_SUPPORT_HPP
#define SOAPGUARD_TESTS_SUPPORT_HPP

#include "crypto.hpp"
#include "soap.hpp"
#include "xml.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace soapguard::test {

inline std::string fixture_path(const std::string& name) { return std::string(SOAPGUARD_TEST_FIXTURES) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline soap::Envelope load_fixture(const std::string& name) { return soap::Envelope::load(fixture_path(name)); }

inline const crypto::KeyPair& test_key() {
  static const crypto::KeyPair key = crypto::KeyPair::generate("soapguard-test-key-1");
  return key;
}

inline constexpr const char* soap_uri = "http://www.w3.org/2001/12/soap-envelope";
inline constexpr const char* wsu_uri =
    "http://docs.oasis-open.org/wss/2004/01/oasis-200401-wss-wssecurity-utility-1.0.xsd";
inline constexpr const char* ex_uri = "urn:soapguard:2026:example";

// Element of the abstract random tree.
struct RandomElement {
  std::string qname;                                       // e.g. "ex:Item" or "item"
  std::vector<std::pair<std::string, std::string>> xmlns;  // local declarations
  std::vector<std::pair<std::string, std::string>> attrs;  // qualified name, raw value
  std::vector<RandomElement> children;
  std::string text; // written before the children, already escaped
};

inline std::size_t element_count(const RandomElement& e) {
  std::size_t n = 1;
  for (const auto& c : e.children)
    n += element_count(c);
  return n;
}

/// Seeded random SOAP envelope. The Header holds zero to three ex: entries,
/// the Body a random payload; some elements carry a wsu:Id (never the
/// Envelope or the Header). Text includes markup characters that need
/// escaping.
class RandomEnvelope {
public:
  explicit RandomEnvelope(std::uint64_t seed) : rng_(seed) { build(); }

  /// XML text with attributes in source order shuffled by `order_seed`
  /// (0 keeps the generated order).
  std::string text(std::uint64_t order_seed = 0) const {
    std::mt19937_64 order(order_seed);
    std::string out;
    write(out, root_, order_seed != 0 ? &order : nullptr);
    return out;
  }

  const RandomElement& root() const { return root_; }

private:
  std::mt19937_64 rng_;
  RandomElement root_;
  int next_id_ = 0;
  int next_prefix_ = 0;

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string word() {
    static const char* words[] = {"alpha", "beta", "gamma", "delta", "IBM", "MBI", "quote", "order", "42", "x-y"};
    return words[pick(std::size(words))];
  }

  std::string value() {
    static const char* tricky[] = {"a&amp;b", "1 &lt; 2", "say &quot;hi&quot;", "x &gt; y", "plain"};
    return coin(0.2) ? tricky[pick(std::size(tricky))] : word();
  }

  void add_attrs(RandomElement& e, bool allow_id) {
    std::size_t n = pick(4);
    static const char* names[] = {"a", "b", "kind", "ex:flag", "ex:ref", "lang"};
    std::vector<std::string> used;
    for (std::size_t i = 0; i < n; ++i) {
      std::string name = names[pick(std::size(names))];
      if (std::find(used.begin(), used.end(), name) != used.end())
        continue;
      used.push_back(name);
      e.attrs.emplace_back(name, value());
    }
    if (allow_id && coin(0.35))
      e.attrs.emplace_back("wsu:Id", "id-" + std::to_string(next_id_++));
  }

  std::string element_name() {
    static const char* names[] = {"item", "quote", "order", "entry", "getQuote", "Data", "x-y", "n.1"};
    return names[pick(std::size(names))];
  }

  RandomElement payload(int depth) {
    RandomElement e;
    bool local_ns = coin(0.15);
    if (local_ns) {
      std::string p = "p" + std::to_string(next_prefix_++);
      e.xmlns.emplace_back(p, "urn:random:" + p);
      e.qname = p + ":" + element_name();
    } else {
      e.qname = coin(0.5) ? "ex:" + element_name() : element_name();
    }
    add_attrs(e, true);
    if (coin(0.5))
      e.text = value();
    if (depth > 0) {
      std::size_t kids = pick(4);
      for (std::size_t i = 0; i < kids; ++i)
        e.children.push_back(payload(depth - 1));
    }
    return e;
  }

  void build() {
    root_.qname = "soap:Envelope";
    root_.xmlns = {{"soap", soap_uri}, {"wsu", wsu_uri}, {"ex", ex_uri}};
    RandomElement header;
    header.qname = "soap:Header";
    std::size_t entries = pick(4);
    for (std::size_t i = 0; i < entries; ++i) {
      RandomElement h = payload(1);
      if (h.qname.rfind("ex:", 0) != 0 && h.xmlns.empty())
        h.qname = "ex:" + h.qname; // header entries must be namespace-qualified
      header.children.push_back(std::move(h));
    }
    RandomElement body;
    body.qname = "soap:Body";
    if (coin(0.7))
      body.attrs.emplace_back("wsu:Id", "body-" + std::to_string(next_id_++));
    std::size_t items = 1 + pick(3);
    for (std::size_t i = 0; i < items; ++i)
      body.children.push_back(payload(static_cast<int>(pick(4))));
    root_.children.push_back(std::move(header));
    root_.children.push_back(std::move(body));
  }

  static void write(std::string& out, const RandomElement& e, std::mt19937_64* order) {
    out += "<" + e.qname;
    for (const auto& [p, u] : e.xmlns)
      out += " xmlns:" + p + "=\"" + u + "\"";
    auto attrs = e.attrs;
    if (order)
      std::shuffle(attrs.begin(), attrs.end(), *order);
    for (const auto& [n, v] : attrs)
      out += " " + n + "=\"" + v + "\"";
    if (e.children.empty() && e.text.empty()) {
      out += "/>";
      return;
    }
    out += ">" + e.text;
    for (const auto& c : e.children)
      write(out, c, order);
    out += "</" + e.qname + ">";
  }
};

} // namespace soapguard::test

#endif
