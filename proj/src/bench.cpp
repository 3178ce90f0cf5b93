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

#include "bench.hpp"

#include "error.hpp"
#include "names.hpp"
#include "query.hpp"

#include <sodium.h>
#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace soapguard::bench {

using sig::Strategy;
using xml::Document;
using xml::Node;

namespace {

std::string str(std::string_view s) { return std::string(s); }

const char* const first_names[] = {"Ayla", "Baran", "Cem", "Deniz", "Elif", "Firat", "Gul", "Hakan", "Ipek", "Kaan"};
const char* const last_names[] = {"Aksoy", "Bulut", "Celik", "Demir", "Erdem", "Kaya", "Ozturk", "Sahin", "Yilmaz"};
const char* const products[] = {"ledger paper", "toner cartridge", "network switch", "office chair", "usb hub",
                                "monitor arm", "desk lamp", "label printer", "paper shredder", "webcam"};
const char* const notes[] = {"deliver to the loading dock", "call before delivery", "leave with reception",
                             "fragile, handle with care", "invoice separately", "partial delivery allowed"};

template <std::size_t N> const char* pick(std::mt19937_64& rng, const char* const (&list)[N]) {
  return list[rng() % N];
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

Node& add_el(Document& doc, Node& parent, std::string_view prefix, std::string_view ns, const char* local) {
  return doc.append_child(parent, doc.create_element(str(prefix), str(ns), local));
}

void add_text_el(Document& doc, Node& parent, const char* local, std::string text) {
  Node& n = add_el(doc, parent, "ex", ns::ex, local);
  doc.append_child(n, doc.create_text(std::move(text)));
}

void add_order(Document& doc, Node& orders, std::uint64_t seed, std::size_t i) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + i);
  Node& o = add_el(doc, orders, "ex", ns::ex, "Order");
  char id[32];
  std::snprintf(id, sizeof id, "ORD-%07zu", i + 1);
  o.set_attribute("", xml::QName{"", "number"}, id);
  o.set_attribute("", xml::QName{"", "currency"}, "EUR");
  add_text_el(doc, o, "Customer", std::string(pick(rng, first_names)) + " " + pick(rng, last_names));
  add_text_el(doc, o, "Product", pick(rng, products));
  add_text_el(doc, o, "Quantity", std::to_string(1 + rng() % 40));
  add_text_el(doc, o, "UnitPrice", fixed2(static_cast<double>(rng() % 50000) / 100.0));
  add_text_el(doc, o, "Note", pick(rng, notes));
}

void add_hop(Document& doc, Node& trace, std::uint64_t seed, std::size_t i) {
  std::mt19937_64 rng(seed * 0xC2B2AE3D27D4EB4Full + i);
  Node& h = add_el(doc, trace, "ex", ns::ex, "Hop");
  h.set_attribute("", xml::QName{"", "node"}, "relay-" + std::to_string(rng() % 100) + ".cmpe.example");
  char at[40];
  std::snprintf(at, sizeof at, "2026-01-01T00:%02u:%02u.%03uZ", unsigned(i / 60 % 60), unsigned(i % 60),
                unsigned(rng() % 1000));
  h.set_attribute("", xml::QName{"", "at"}, at);
}

soap::Envelope build(std::size_t items, std::size_t hops, std::uint64_t seed) {
  Document doc = Document::with_root("soap", str(ns::soap), "Envelope");
  Node& root = doc.root();
  root.declare_namespace("soap", str(ns::soap));
  root.declare_namespace("wsse", str(ns::wsse));
  root.declare_namespace("wsu", str(ns::wsu));
  root.declare_namespace("ex", str(ns::ex));
  Node& header = add_el(doc, root, "soap", ns::soap, "Header");
  Node& sec = add_el(doc, header, "wsse", ns::wsse, "Security");
  sec.set_attribute("soap", xml::QName{str(ns::soap), "role"}, str(role::ultimate_receiver));
  Node& ts = add_el(doc, sec, "wsu", ns::wsu, "Timestamp");
  ts.set_attribute("wsu", xml::QName{str(ns::wsu), "Id"}, "TS");
  Node& created = add_el(doc, ts, "wsu", ns::wsu, "Created");
  doc.append_child(created, doc.create_text("2026-01-01T00:00:00Z"));
  Node& expires = add_el(doc, ts, "wsu", ns::wsu, "Expires");
  doc.append_child(expires, doc.create_text("2026-01-01T00:05:00Z"));
  Node& trace = add_el(doc, header, "ex", ns::ex, "Trace");
  for (std::size_t i = 0; i < hops; ++i)
    add_hop(doc, trace, seed, i);
  Node& body = add_el(doc, root, "soap", ns::soap, "Body");
  body.set_attribute("wsu", xml::QName{str(ns::wsu), "Id"}, "CMPE");
  Node& orders = add_el(doc, body, "ex", ns::ex, "Orders");
  for (std::size_t i = 0; i < items; ++i)
    add_order(doc, orders, seed, i);
  return soap::Envelope(std::move(doc));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

PhaseStats stats(const std::vector<double>& v) {
  PhaseStats s;
  s.median_ns = median_of(v);
  std::vector<double> dev;
  for (double x : v)
    dev.push_back(std::fabs(x - s.median_ns));
  s.mad_ns = median_of(dev);
  return s;
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

// Signature primitive calls averaged per encrypt sample.
constexpr std::size_t encrypt_batch = 64;

// Keeps results observable so the timed calls cannot be optimized away.
volatile std::uint8_t sink;

const BenchRecord* find_record(const std::vector<BenchRecord>& rs, Strategy s, std::size_t size) {
  for (const auto& r : rs)
    if (r.strategy == s && r.size_bytes == size)
      return &r;
  return nullptr;
}

std::string ratio(double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", b == 0 ? 0.0 : a / b);
  return buf;
}

std::string ms(double ns) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f ms", ns / 1e6);
  return buf;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

} // namespace

bool operator==(const BenchRecord& a, const BenchRecord& b) {
  auto eq = [](const PhaseStats& x, const PhaseStats& y) { return x.median_ns == y.median_ns && x.mad_ns == y.mad_ns; };
  return a.strategy == b.strategy && a.size_bytes == b.size_bytes && eq(a.find, b.find) && eq(a.hash, b.hash) &&
         eq(a.encrypt, b.encrypt) && eq(a.total_code1, b.total_code1) && eq(a.total_code2, b.total_code2);
}

void validate(const BenchConfig& cfg) {
  if (cfg.sizes.empty())
    throw Error(ErrorCode::invalid_argument, "bench: no sizes given");
  for (std::size_t i = 1; i < cfg.sizes.size(); ++i)
    if (cfg.sizes[i] <= cfg.sizes[i - 1])
      throw Error(ErrorCode::invalid_argument, "bench: sizes must be strictly ascending");
  if (cfg.repetitions < 5)
    throw Error(ErrorCode::invalid_argument, "bench: at least 5 repetitions are required");
  if (cfg.strategies.empty())
    throw Error(ErrorCode::invalid_argument, "bench: no strategies given");
}

soap::Envelope generate_envelope(std::size_t target, std::uint64_t seed) {
  const double empty = static_cast<double>(build(0, 0, seed).to_string().size());
  constexpr std::size_t probe = 20;
  const double per_item = (static_cast<double>(build(probe, 0, seed).to_string().size()) - empty) / probe;
  const double per_hop = (static_cast<double>(build(0, probe, seed).to_string().size()) - empty) / probe;
  const double room = std::max(0.0, static_cast<double>(target) - empty);
  auto hops = static_cast<std::size_t>(std::llround(0.1 * room / per_hop));
  auto items = static_cast<std::size_t>(std::llround(0.9 * room / per_item));
  soap::Envelope env = build(items, hops, seed);
  for (int round = 0; round < 8; ++round) {
    double len = static_cast<double>(env.to_string().size());
    double miss = static_cast<double>(target) - len;
    if (std::fabs(miss) <= 0.005 * static_cast<double>(target))
      break;
    long long step = std::llround(miss / per_item);
    if (step == 0)
      break;
    items = static_cast<std::size_t>(std::max<long long>(0, static_cast<long long>(items) + step));
    env = build(items, hops, seed);
  }
  return env;
}

std::vector<soap::Envelope> generate_corpus(const BenchConfig& cfg) {
  std::vector<soap::Envelope> out;
  for (std::size_t size : cfg.sizes)
    out.push_back(generate_envelope(size, cfg.seed));
  return out;
}

std::vector<sig::ReferenceTarget> bench_targets(Strategy s) {
  switch (s) {
  case Strategy::id: return {sig::IdTarget{"CMPE"}};
  case Strategy::xpath: return {sig::PathTarget{xml::parse_path("/soap:Envelope/soap:Body")}};
  default: return {};
  }
}

namespace {

struct Sample {
  double find, hash, enc, code2;
};

// Everything one strategy needs before its timed repetitions, plus the
// samples collected so far.
class PhaseTimer {
public:
  PhaseTimer(Strategy strategy, const soap::Envelope& env, const crypto::KeyPair& key)
      : strategy_(strategy), env_(env), key_(key), targets_(bench_targets(strategy)) {
    try {
      signed_env_ = sig::sign(env, strategy, targets_, key);
    } catch (const Error& e) {
      throw Error(ErrorCode::not_applicable,
                  std::string("bench: ") + sig::strategy_name(strategy) + " cannot sign this envelope: " + e.what());
    }
    xml::walk(signed_env_->doc().root(), [&](const Node& n) {
      if (n.is(ns::ds, "SignedInfo")) {
        signed_info_ = &n;
        return false;
      }
      return true;
    });
    // What the find and hash phases resolve: the Body for the per-element
    // strategies (the inline method references it by id), the whole
    // envelope for SESOAP.
    if (strategy == Strategy::id || strategy == Strategy::inline_account)
      phase_target_ = sig::IdTarget{"CMPE"};
    else if (strategy == Strategy::xpath)
      phase_target_ = targets_.front();
  }

  void run(bool keep) {
    Sample s{};
    sig::Dereferenced d;
    if (strategy_ == Strategy::sesoap) {
      d = sig::dereference(env_.doc(), phase_target_); // no search happens; not timed
    } else {
      auto t0 = Clock::now();
      d = sig::dereference(env_.doc(), phase_target_);
      s.find = since(t0);
    }
    auto t1 = Clock::now();
    crypto::DigestValue dv = sig::digest_content(d);
    s.hash = since(t1);
    sink = dv.bytes[0];

    // One call takes tens of microseconds, small enough for the cache state
    // left by the hash phase to dominate, so a short batch is averaged.
    auto t2 = Clock::now();
    for (std::size_t i = 0; i < encrypt_batch; ++i) {
      crypto::Signature sv = sig::sign_signed_info(*signed_info_, key_);
      sink = sv[0];
    }
    s.enc = since(t2) / static_cast<double>(encrypt_batch);

    soap::Envelope fresh = env_;
    auto t3 = Clock::now();
    sig::sign_in_place(fresh, strategy_, targets_, key_);
    s.code2 = since(t3);
    sink = static_cast<std::uint8_t>(fresh.doc().next_id());

    if (keep)
      samples_.push_back(s);
  }

  BenchRecord record() const {
    std::vector<double> find, hash, enc, code1, code2;
    for (const Sample& s : samples_) {
      find.push_back(s.find);
      hash.push_back(s.hash);
      enc.push_back(s.enc);
      code1.push_back(s.find + s.hash + s.enc);
      code2.push_back(s.code2);
    }
    BenchRecord r;
    r.strategy = strategy_;
    r.size_bytes = env_.to_string().size();
    r.find = stats(find);
    r.hash = stats(hash);
    r.encrypt = stats(enc);
    r.total_code1 = stats(code1);
    r.total_code2 = stats(code2);
    return r;
  }

private:
  Strategy strategy_;
  const soap::Envelope& env_;
  const crypto::KeyPair& key_;
  std::vector<sig::ReferenceTarget> targets_;
  std::optional<soap::Envelope> signed_env_;
  const Node* signed_info_ = nullptr;
  sig::ReferenceTarget phase_target_ = sig::WholeEnvelope{};
  std::vector<Sample> samples_;
};

} // namespace

BenchRecord time_phases(Strategy strategy, const soap::Envelope& env, const BenchConfig& cfg,
                        const crypto::KeyPair& key) {
  PhaseTimer t(strategy, env, key);
  for (std::size_t rep = 0; rep < cfg.warmup + cfg.repetitions; ++rep)
    t.run(rep >= cfg.warmup);
  return t.record();
}

// Strategies take turns within each repetition, with a rotating start, so
// that drift in machine load is shared instead of landing on one of them.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg, const crypto::KeyPair& key) {
  validate(cfg);
  std::vector<BenchRecord> out;
  for (std::size_t size : cfg.sizes) {
    soap::Envelope env = generate_envelope(size, cfg.seed);
    std::vector<PhaseTimer> timers;
    timers.reserve(cfg.strategies.size());
    for (Strategy s : cfg.strategies)
      timers.emplace_back(s, env, key);
    const std::size_t n = timers.size();
    for (std::size_t rep = 0; rep < cfg.warmup + cfg.repetitions; ++rep)
      for (std::size_t i = 0; i < n; ++i)
        timers[(rep + i) % n].run(rep >= cfg.warmup);
    for (const PhaseTimer& t : timers)
      out.push_back(t.record());
  }
  return out;
}

bool TrendReport::all_passed() const {
  return claims.size() == 5 && std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.passed; });
}

TrendReport check_trends(const std::vector<BenchRecord>& records) {
  std::set<std::size_t> common;
  for (const auto& r : records)
    if (find_record(records, Strategy::id, r.size_bytes) && find_record(records, Strategy::xpath, r.size_bytes) &&
        find_record(records, Strategy::sesoap, r.size_bytes))
      common.insert(r.size_bytes);
  if (common.size() < 3)
    throw Error(ErrorCode::insufficient_data, "trend check needs ID, XPATH and SESOAP records at three or more sizes "
                                              "(have " + std::to_string(common.size()) + ")");
  TrendReport rep;
  rep.size_bytes = *common.rbegin();
  const BenchRecord& id = *find_record(records, Strategy::id, rep.size_bytes);
  const BenchRecord& xp = *find_record(records, Strategy::xpath, rep.size_bytes);
  const BenchRecord& ses = *find_record(records, Strategy::sesoap, rep.size_bytes);

  Claim find{"find: SESOAP is zero and ID is faster than XPATH", false, ""};
  find.passed = ses.find.median_ns == 0 && id.find.median_ns < xp.find.median_ns;
  find.measured = "SESOAP " + ms(ses.find.median_ns) + ", ID " + ms(id.find.median_ns) + ", XPATH " +
                  ms(xp.find.median_ns) + ", ID/XPATH " + ratio(id.find.median_ns, xp.find.median_ns);

  Claim hash{"hash: SESOAP is slower than ID and XPATH", false, ""};
  hash.passed = ses.hash.median_ns > std::max(id.hash.median_ns, xp.hash.median_ns);
  hash.measured = "SESOAP/ID " + ratio(ses.hash.median_ns, id.hash.median_ns) + ", SESOAP/XPATH " +
                  ratio(ses.hash.median_ns, xp.hash.median_ns);

  Claim enc{"encrypt: equal across strategies within 10%", false, ""};
  double lo = std::min({id.encrypt.median_ns, xp.encrypt.median_ns, ses.encrypt.median_ns});
  double hi = std::max({id.encrypt.median_ns, xp.encrypt.median_ns, ses.encrypt.median_ns});
  enc.passed = lo > 0 && hi / lo <= 1.1;
  enc.measured = "ID " + ms(id.encrypt.median_ns) + ", XPATH " + ms(xp.encrypt.median_ns) + ", SESOAP " +
                 ms(ses.encrypt.median_ns) + ", max/min " + ratio(hi, lo);

  Claim c1{"code1 total: SESOAP < ID < XPATH and SESOAP/XPATH <= 0.5", false, ""};
  c1.passed = ses.total_code1.median_ns < id.total_code1.median_ns &&
              id.total_code1.median_ns < xp.total_code1.median_ns &&
              ses.total_code1.median_ns <= 0.5 * xp.total_code1.median_ns;
  c1.measured = "SESOAP " + ms(ses.total_code1.median_ns) + ", ID " + ms(id.total_code1.median_ns) + ", XPATH " +
                ms(xp.total_code1.median_ns) + ", SESOAP/XPATH " +
                ratio(ses.total_code1.median_ns, xp.total_code1.median_ns) + ", SESOAP/ID " +
                ratio(ses.total_code1.median_ns, id.total_code1.median_ns);

  Claim c2{"code2 total: same ordering as code1", false, ""};
  c2.passed = ses.total_code2.median_ns < id.total_code2.median_ns &&
              id.total_code2.median_ns < xp.total_code2.median_ns;
  c2.measured = "SESOAP " + ms(ses.total_code2.median_ns) + ", ID " + ms(id.total_code2.median_ns) + ", XPATH " +
                ms(xp.total_code2.median_ns) + ", SESOAP/XPATH " +
                ratio(ses.total_code2.median_ns, xp.total_code2.median_ns);

  rep.claims = {find, hash, enc, c1, c2};

  // Monotonicity in size, per strategy and phase. A drop only counts when it
  // is larger than the noise band of the two cells involved.
  std::map<Strategy, std::vector<const BenchRecord*>> by_strategy;
  for (const auto& r : records)
    by_strategy[r.strategy].push_back(&r);
  for (auto& [s, rs] : by_strategy) {
    std::sort(rs.begin(), rs.end(), [](auto* a, auto* b) { return a->size_bytes < b->size_bytes; });
    const std::pair<const char*, PhaseStats BenchRecord::*> phases[] = {
        {"find", &BenchRecord::find},       {"hash", &BenchRecord::hash},
        {"encrypt", &BenchRecord::encrypt}, {"code1", &BenchRecord::total_code1},
        {"code2", &BenchRecord::total_code2}};
    for (const auto& [name, member] : phases)
      for (std::size_t i = 1; i < rs.size(); ++i) {
        const PhaseStats& a = rs[i - 1]->*member;
        const PhaseStats& b = rs[i]->*member;
        double band = std::max({3 * a.mad_ns, 3 * b.mad_ns, 0.05 * a.median_ns});
        if (b.median_ns + band < a.median_ns)
          rep.monotonicity.push_back(std::string(sig::strategy_name(s)) + " " + name + " drops from " +
                                     ms(a.median_ns) + " at " + std::to_string(rs[i - 1]->size_bytes) + " B to " +
                                     ms(b.median_ns) + " at " + std::to_string(rs[i]->size_bytes) + " B");
      }
  }
  return rep;
}

std::string render_trends(const TrendReport& r) {
  std::ostringstream out;
  out << "trend claims at " << r.size_bytes << " bytes (medians; the 0.5 ratio cap and the 10% encrypt band are "
      << "acceptance bands of this tool):\n";
  for (std::size_t i = 0; i < r.claims.size(); ++i)
    out << "  " << (r.claims[i].passed ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << r.claims[i].name << "\n"
        << "        " << r.claims[i].measured << "\n";
  if (r.monotonicity.empty()) {
    out << "monotonicity (informational): every phase is non-decreasing in size within the noise band\n";
  } else {
    out << "monotonicity (informational):\n";
    for (const auto& m : r.monotonicity)
      out << "  " << m << "\n";
  }
  return out.str();
}

std::string to_csv(const std::vector<BenchRecord>& records, const std::string& preamble) {
  std::ostringstream out;
  out << preamble;
  out << "strategy,size_bytes,find_ns,hash_ns,encrypt_ns,total_code1_ns,total_code2_ns,"
         "mad_find_ns,mad_hash_ns,mad_encrypt_ns,mad_total_code1_ns,mad_total_code2_ns\n";
  for (const auto& r : records)
    out << sig::strategy_name(r.strategy) << ',' << r.size_bytes << ',' << num(r.find.median_ns) << ','
        << num(r.hash.median_ns) << ',' << num(r.encrypt.median_ns) << ',' << num(r.total_code1.median_ns) << ','
        << num(r.total_code2.median_ns) << ',' << num(r.find.mad_ns) << ',' << num(r.hash.mad_ns) << ','
        << num(r.encrypt.mad_ns) << ',' << num(r.total_code1.mad_ns) << ',' << num(r.total_code2.mad_ns) << '\n';
  return out.str();
}

std::vector<BenchRecord> read_csv(const std::string& text) {
  std::vector<BenchRecord> out;
  std::istringstream in(text);
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("strategy,", 0) == 0)
      continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string x; std::getline(fields, x, ',');)
      f.push_back(x);
    auto s = f.empty() ? std::nullopt : sig::parse_strategy(f[0]);
    if (f.size() != 12 || !s)
      throw Error(ErrorCode::invalid_argument, "bench csv line " + std::to_string(lineno) + " is malformed");
    BenchRecord r;
    r.strategy = *s;
    try {
      r.size_bytes = std::stoull(f[1]);
      PhaseStats* cells[] = {&r.find, &r.hash, &r.encrypt, &r.total_code1, &r.total_code2};
      for (int i = 0; i < 5; ++i) {
        cells[i]->median_ns = std::stod(f[2 + i]);
        cells[i]->mad_ns = std::stod(f[7 + i]);
      }
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bench csv line " + std::to_string(lineno) + " has a bad number");
    }
    out.push_back(r);
  }
  return out;
}

std::string plot_data(const std::vector<BenchRecord>& records) {
  std::vector<Strategy> strategies;
  std::set<std::size_t> sizes;
  for (const auto& r : records) {
    if (std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end())
      strategies.push_back(r.strategy);
    sizes.insert(r.size_bytes);
  }
  std::ostringstream out;
  out << "# size_bytes";
  for (Strategy s : strategies)
    out << ' ' << sig::strategy_flag(s) << "_code1_ms " << sig::strategy_flag(s) << "_code2_ms";
  out << '\n';
  for (std::size_t size : sizes) {
    out << size;
    for (Strategy s : strategies) {
      const BenchRecord* r = find_record(records, s, size);
      char buf[64];
      if (r)
        std::snprintf(buf, sizeof buf, " %.4f %.4f", r->total_code1.median_ns / 1e6, r->total_code2.median_ns / 1e6);
      else
        std::snprintf(buf, sizeof buf, " NaN NaN");
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string environment_preamble() {
  std::ostringstream out;
  std::string cpu = "unknown cpu";
  std::ifstream cpuinfo("/proc/cpuinfo");
  for (std::string line; std::getline(cpuinfo, line);)
    if (line.rfind("model name", 0) == 0) {
      cpu = line.substr(line.find(':') + 2);
      break;
    }
  std::string mem = "unknown";
  std::ifstream meminfo("/proc/meminfo");
  for (std::string line; std::getline(meminfo, line);)
    if (line.rfind("MemTotal:", 0) == 0) {
      std::istringstream fields(line.substr(9));
      double kb = 0;
      fields >> kb;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f GB", kb / 1024.0 / 1024.0);
      mem = buf;
      break;
    }
  utsname u{};
  uname(&u);
  out << "# machine: " << cpu << ", " << std::thread::hardware_concurrency() << " logical cpus, " << mem
      << " memory\n";
  out << "# system: " << u.sysname << ' ' << u.release << ' ' << u.machine << '\n';
  out << "# build: " << "g++ " << __VERSION__ << ", libsodium " << sodium_version_string() << '\n';
  out << "# timings: single thread, median over repetitions after warmup, dispersion = median absolute deviation\n";
  out << "# total_code2 is one sign call, including building and attaching the Signature element\n";
  return out.str();
}

} // namespace soapguard::bench
