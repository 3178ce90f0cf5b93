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

#ifndef SOAPGUARD_BENCH_HPP
#define SOAPGUARD_BENCH_HPP

#include "crypto.hpp"
#include "soap.hpp"
#include "xmlsig.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace soapguard::bench {

inline constexpr std::size_t default_sizes[] = {32'000, 128'000, 512'000, 1'000'000, 3'150'000};

struct BenchConfig {
  std::vector<std::size_t> sizes{std::begin(default_sizes), std::end(default_sizes)};
  std::size_t repetitions = 20;
  std::vector<sig::Strategy> strategies{sig::Strategy::id, sig::Strategy::xpath, sig::Strategy::sesoap};
  std::size_t warmup = 2;
  std::uint64_t seed = 1;
};

/// Throws InvalidArgument unless sizes are non-empty and strictly
/// ascending, repetitions >= 5 and at least one strategy is given.
void validate(const BenchConfig& cfg);

/// One envelope per configured size. The Body (wsu:Id "CMPE") holds
/// repeated order records and the header carries unsigned trace-hop entries
/// worth about a tenth of the padding, so content outside the Body is
/// realistic rather than empty. Serialized length (Envelope::to_string) is
/// within 2% of the target. Deterministic under cfg.seed.
std::vector<soap::Envelope> generate_corpus(const BenchConfig& cfg);

soap::Envelope generate_envelope(std::size_t target_bytes, std::uint64_t seed);

/// The reference target each strategy signs in the benchmark: the Body.
std::vector<sig::ReferenceTarget> bench_targets(sig::Strategy s);

struct PhaseStats {
  double median_ns = 0;
  double mad_ns = 0;
};

struct BenchRecord {
  sig::Strategy strategy{};
  std::size_t size_bytes = 0;
  PhaseStats find, hash, encrypt, total_code1, total_code2;

  friend bool operator==(const BenchRecord& a, const BenchRecord& b);
};

/// Timings for one strategy on one envelope.
///  find:    target resolution (literally zero for SESOAP: no call is made)
///  hash:    canonicalization plus digest of the resolved content
///  encrypt: canonical SignedInfo plus the signature primitive, as the mean
///           of a short batch of back-to-back calls
///  code1:   find + hash + encrypt of the same repetition
///  code2:   one sign_in_place() call on a fresh copy, which includes
///           building and attaching the Signature element
/// Warmup repetitions are run and discarded.
/// Errors: NotApplicable when the strategy cannot sign the envelope.
BenchRecord time_phases(sig::Strategy strategy, const soap::Envelope& env, const BenchConfig& cfg,
                        const crypto::KeyPair& key);

/// Cross product sizes x strategies, size-major, strategies in cfg order.
/// Within a size the strategies are timed in turns, one repetition each.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg, const crypto::KeyPair& key);

struct Claim {
  std::string name;
  bool passed = false;
  std::string measured; // ratios and values behind the verdict
};

struct TrendReport {
  std::size_t size_bytes = 0; // size the claims were evaluated at
  std::vector<Claim> claims;  // exactly five
  std::vector<std::string> monotonicity; // informational findings
  bool all_passed() const;
};

/// Evaluates the five trend claims at the largest size measured for ID,
/// XPATH and SESOAP alike.
/// Errors: InsufficientData unless those three strategies share at least
/// three sizes.
TrendReport check_trends(const std::vector<BenchRecord>& records);

std::string render_trends(const TrendReport& r);

/// One row per record after a header row; lines starting with '#' form the
/// preamble.
std::string to_csv(const std::vector<BenchRecord>& records, const std::string& preamble = {});
std::vector<BenchRecord> read_csv(const std::string& text);

/// Whitespace-separated columns: size_bytes then the median code1 and code2
/// totals (ms) of each strategy, one row per size.
std::string plot_data(const std::vector<BenchRecord>& records);

/// Machine and build description, each line prefixed with "# ".
std::string environment_preamble();

} // namespace soapguard::bench

#endif
