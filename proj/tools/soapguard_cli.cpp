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

// Command-line front end. Everything here is argument parsing, file I/O
// and exit-code mapping over the C API.

#include <soapguard/soapguard.h>

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit {
  exit_ok = 0,
  exit_failed = 1, // invalid signature, matrix mismatch, failed trend claim
  exit_input = 2,  // input unreadable, not well-formed, or already signed
  exit_target = 3,
  exit_no_signature = 4,
  exit_precondition = 5,
  exit_insufficient = 6,
  exit_usage = 64,
  exit_internal = 70,
};

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <class T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Envelope = Handle<sg_envelope, sg_envelope_free>;
using Key = Handle<sg_keypair, sg_keypair_free>;
using Text = Handle<char, sg_string_free>;

// Thrown after a diagnostic has been printed.
struct ExitWith {
  int code;
};

[[noreturn]] void die(int code, const std::string& message) {
  std::cerr << "soapguard: " << message << '\n';
  throw ExitWith{code};
}

[[noreturn]] void die_status(sg_status st, const std::string& context, int fallback) {
  int code = fallback;
  switch (st) {
  case SG_ERR_MALFORMED_XML:
  case SG_ERR_IO: code = exit_input; break;
  case SG_ERR_INVALID_ARGUMENT:
  case SG_ERR_BAD_PERMUTATION: code = exit_usage; break;
  case SG_ERR_INTERNAL: code = exit_internal; break;
  default: break;
  }
  die(code, context + ": " + sg_status_name(st) + ": " + sg_last_error());
}

std::string fixtures_dir() {
  if (const char* env = std::getenv("SOAPGUARD_FIXTURES"); env && *env)
    return env;
  return SOAPGUARD_DEFAULT_FIXTURES;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    die(exit_input, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    die(exit_internal, "cannot write " + path);
}

std::string take(char* s) { return Text(s).get(); }

Envelope load(const std::string& path) {
  sg_envelope* e = nullptr;
  sg_status st = path == "-" ? [&] {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    std::string text = ss.str();
    return sg_envelope_parse(text.data(), text.size(), &e);
  }()
                             : sg_envelope_load(path.c_str(), &e);
  if (st != SG_OK)
    die_status(st, "reading " + path, exit_input);
  return Envelope(e);
}

void save(const sg_envelope* env, const std::string& path) {
  char* text = nullptr;
  if (sg_status st = sg_envelope_serialize(env, 2, &text); st != SG_OK)
    die_status(st, "serializing", exit_internal);
  write_text(path, take(text) + "\n");
}

// The seed from --key-seed, else the fixture directory's keys.seed.
Key make_key(const std::string& seed_flag) {
  std::string seed = seed_flag;
  if (seed.empty()) {
    std::ifstream in(fixtures_dir() + "/keys.seed");
    std::getline(in, seed);
    while (!seed.empty() && (seed.back() == '\r' || seed.back() == ' '))
      seed.pop_back();
    if (seed.empty())
      die(exit_usage, "no --key-seed given and no keys.seed in " + fixtures_dir());
  }
  sg_keypair* k = nullptr;
  if (sg_status st = sg_keypair_from_seed(seed.c_str(), &k); st != SG_OK)
    die_status(st, "key", exit_usage);
  return Key(k);
}

bool machine_format(const std::string& f) { return f == "machine"; }

struct Options {
  std::string in, out, strategy, attack, key_seed, format = "table";
  std::vector<std::string> targets;
  std::string payload, new_id, expected, plot;
  std::vector<std::size_t> permutation, sizes;
  std::size_t repetitions = 20, warmup = 2;
  std::uint64_t seed = 1;
  std::vector<std::string> strategies;
  bool trust = false, policy = false;
  std::string body_id = "CMPE";
};

int cmd_sign(const Options& o) {
  sg_strategy s{};
  if (sg_strategy_parse(o.strategy.c_str(), &s) != SG_OK)
    die(exit_usage, sg_last_error());
  Envelope env = load(o.in);
  Key key = make_key(o.key_seed);
  std::vector<const char*> targets;
  for (const auto& t : o.targets)
    targets.push_back(t.c_str());
  sg_envelope* out = nullptr;
  sg_status st = sg_sign(env.get(), s, targets.data(), targets.size(), key.get(), &out);
  if (st == SG_ERR_TARGET_NOT_FOUND || st == SG_ERR_AMBIGUOUS_PATH)
    die_status(st, "sign", exit_target);
  if (st == SG_ERR_ALREADY_SIGNED)
    die_status(st, "sign", exit_input);
  if (st != SG_OK)
    die_status(st, "sign", exit_internal);
  Envelope signed_env(out);
  save(signed_env.get(), o.out);
  return exit_ok;
}

int cmd_verify(const Options& o) {
  Envelope env = load(o.in);
  Key key = make_key(o.key_seed);
  Handle<sg_trust_store, sg_trust_store_free> trust;
  if (o.trust || o.policy) {
    sg_trust_store* t = nullptr;
    sg_trust_store_new(&t);
    trust.reset(t);
    sg_trust_store_add(t, key.get());
  }
  sg_verify_report* r = nullptr;
  sg_status st = sg_verify(env.get(), key.get(), o.trust ? trust.get() : nullptr, &r);
  if (st == SG_ERR_NO_SIGNATURE)
    die_status(st, "verify", exit_no_signature);
  if (st == SG_ERR_UNKNOWN_KEY)
    die_status(st, "verify", exit_failed);
  if (st != SG_OK)
    die_status(st, "verify", exit_internal);
  Handle<sg_verify_report, sg_verify_report_free> report(r);
  char* text = nullptr;
  sg_verify_report_render(r, machine_format(o.format), &text);
  std::cout << take(text);
  bool ok = sg_verify_report_valid(r);
  if (o.policy) {
    sg_policy_report* p = nullptr;
    if (sg_status ps = sg_policy_check(env.get(), trust.get(), &p); ps != SG_OK)
      die_status(ps, "policy", exit_internal);
    Handle<sg_policy_report, sg_policy_report_free> policy(p);
    sg_policy_report_render(p, &text);
    std::cout << take(text);
    ok = ok && sg_policy_report_passed(p);
  }
  if (sg_verify_report_mismatch_count(r) > 0)
    std::cerr << "soapguard: warning: " << sg_verify_report_mismatch_count(r)
              << " reference(s) resolved to content the application does not process\n";
  return ok ? exit_ok : exit_failed;
}

int cmd_attack(const Options& o) {
  sg_attack a{};
  if (sg_attack_parse(o.attack.c_str(), &a) != SG_OK)
    die(exit_usage, sg_last_error());
  Envelope env = load(o.in);
  std::string payload = o.payload.empty() ? std::string() : read_file(o.payload);
  sg_attack_options opt{};
  opt.target = o.targets.empty() ? nullptr : o.targets.front().c_str();
  opt.payload_xml = payload.empty() ? nullptr : payload.c_str();
  opt.new_id = o.new_id.empty() ? nullptr : o.new_id.c_str();
  opt.permutation = o.permutation.empty() ? nullptr : o.permutation.data();
  opt.permutation_len = o.permutation.size();
  sg_envelope* out = nullptr;
  sg_status st = sg_attack_apply(env.get(), a, &opt, &out);
  switch (st) {
  case SG_OK: break;
  case SG_ERR_NO_SIGNATURE:
  case SG_ERR_NO_SIGNED_BODY:
  case SG_ERR_HEADER_NOT_FOUND:
  case SG_ERR_NO_TIMESTAMP:
  case SG_ERR_NOT_ENOUGH_SIGNED_SIBLINGS:
  case SG_ERR_NO_SOAP_ACCOUNT:
  case SG_ERR_CANNOT_PRESERVE_COUNTS:
  case SG_ERR_TARGET_NOT_FOUND:
  case SG_ERR_AMBIGUOUS_BODY: die_status(st, "attack precondition not met", exit_precondition);
  default: die_status(st, "attack", exit_internal);
  }
  Envelope attacked(out);
  save(attacked.get(), o.out);
  return exit_ok;
}

int cmd_matrix(const Options& o) {
  std::string in = o.in.empty() ? fixtures_dir() + "/base.xml" : o.in;
  std::string expected_path = o.expected.empty() ? fixtures_dir() + "/expected_matrix.tsv" : o.expected;
  Envelope base = load(in);
  std::string expected = read_file(expected_path);
  Key key = make_key(o.key_seed);
  sg_matrix* m = nullptr;
  if (sg_status st = sg_matrix_run(base.get(), key.get(), &m); st != SG_OK)
    die_status(st, "matrix", exit_internal);
  Handle<sg_matrix, sg_matrix_free> matrix(m);
  char* text = nullptr;
  sg_matrix_render(m, machine_format(o.format), &text);
  write_text(o.out, take(text));
  int matches = 0;
  char* diff = nullptr;
  if (sg_status st = sg_matrix_compare(m, expected.c_str(), &matches, &diff); st != SG_OK)
    die_status(st, "reading " + expected_path, exit_input);
  std::string d = take(diff);
  if (!matches) {
    std::cerr << "soapguard: matrix differs from " << expected_path << ":\n" << d;
    return exit_failed;
  }
  return exit_ok;
}

int cmd_bench(const Options& o) {
  Key key = make_key(o.key_seed);
  std::vector<sg_strategy> strategies;
  for (const auto& s : o.strategies) {
    sg_strategy v{};
    if (sg_strategy_parse(s.c_str(), &v) != SG_OK)
      die(exit_usage, sg_last_error());
    strategies.push_back(v);
  }
  sg_bench_config cfg{};
  cfg.sizes = o.sizes.empty() ? nullptr : o.sizes.data();
  cfg.n_sizes = o.sizes.size();
  cfg.repetitions = o.repetitions;
  cfg.warmup = o.warmup;
  cfg.seed = o.seed;
  cfg.strategies = strategies.empty() ? nullptr : strategies.data();
  cfg.n_strategies = strategies.size();
  sg_bench_result* r = nullptr;
  if (sg_status st = sg_bench_run(&cfg, key.get(), &r); st != SG_OK)
    die_status(st, "bench", exit_internal);
  Handle<sg_bench_result, sg_bench_result_free> result(r);

  char* text = nullptr;
  sg_bench_csv(r, &text);
  std::string csv = take(text);
  if (!o.out.empty())
    write_text(o.out, csv);
  else if (machine_format(o.format))
    std::cout << csv;
  if (!o.plot.empty()) {
    sg_bench_plot_data(r, &text);
    write_text(o.plot, take(text));
  }

  int passed = 0;
  sg_status st = sg_bench_trends(r, &passed, &text);
  if (st == SG_ERR_INSUFFICIENT_DATA)
    die_status(st, "trend check", exit_insufficient);
  if (st != SG_OK)
    die_status(st, "trend check", exit_internal);
  // The trend report is diagnostic when the CSV goes to stdout.
  (machine_format(o.format) && o.out.empty() ? std::cerr : std::cout) << take(text);
  return passed ? exit_ok : exit_failed;
}

int cmd_demo(const Options& o) {
  std::string in = o.in.empty() ? fixtures_dir() + "/fig3_pre.xml" : o.in;
  Envelope env = load(in);
  Key key = make_key(o.key_seed);
  char* text = nullptr;
  if (sg_status st = sg_demo(env.get(), o.body_id.c_str(), key.get(), &text); st != SG_OK)
    die_status(st, "demo", exit_internal);
  std::cout << take(text);
  return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"soapguard: XML signatures over SOAP, wrapping attacks and countermeasures"};
  app.require_subcommand(1);
  Options o;

  auto strategy_check = CLI::IsMember({"id", "xpath", "sesoap", "inline"});
  auto attack_check = CLI::IsMember({"simple", "optional", "sibling-value", "sibling-order", "count-preserving"});
  auto format_check = CLI::IsMember({"table", "machine"});
  auto add_key = [&](CLI::App* c) {
    c->add_option("--key-seed", o.key_seed, "Key seed (default: keys.seed in the fixture directory)");
  };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Report format")->check(format_check)->capture_default_str();
  };

  auto* sign = app.add_subcommand("sign", "Sign an envelope");
  sign->add_option("--in", o.in, "Input envelope ('-' for stdin)")->required();
  sign->add_option("--out", o.out, "Output file (default stdout)");
  sign->add_option("--strategy", o.strategy, "Referencing strategy")->required()->check(strategy_check);
  sign->add_option("--target", o.targets, "wsu:Id or absolute path to sign (repeatable)");
  add_key(sign);

  auto* verify = app.add_subcommand("verify", "Verify every signature and report what each reference resolved to");
  verify->add_option("--in", o.in, "Input envelope ('-' for stdin)")->required();
  verify->add_flag("--trust", o.trust, "Require the KeyName to belong to the key seed");
  verify->add_flag("--policy", o.policy, "Also run the four-point receiver policy");
  add_key(verify);
  add_format(verify);

  auto* attack = app.add_subcommand("attack", "Apply a wrapping attack to a signed envelope");
  attack->add_option("--in", o.in, "Signed envelope ('-' for stdin)")->required();
  attack->add_option("--out", o.out, "Output file (default stdout)");
  attack->add_option("--attack", o.attack, "Attack kind")->required()->check(attack_check);
  attack->add_option("--target", o.targets, "Header element to hide (optional attack), e.g. wsa:ReplyTo")
      ->expected(1);
  attack->add_option("--payload", o.payload, "File holding the injected Body content");
  attack->add_option("--new-id", o.new_id, "wsu:Id of the injected Body");
  attack->add_option("--permutation", o.permutation, "New order of the signed siblings (sibling-order)")
      ->delimiter(',');

  auto* matrix = app.add_subcommand("matrix", "Run every attack against every strategy and compare to the golden");
  matrix->add_option("--in", o.in, "Unsigned base envelope (default: base.xml in the fixture directory)");
  matrix->add_option("--expected", o.expected, "Expected matrix (default: expected_matrix.tsv)");
  matrix->add_option("--out", o.out, "Report file (default stdout)");
  add_key(matrix);
  add_format(matrix);

  auto* bench = app.add_subcommand("bench", "Time find / hash / encrypt / total and check the trend claims");
  bench->add_option("--sizes", o.sizes, "Envelope sizes in bytes, ascending")->delimiter(',');
  bench->add_option("--repetitions", o.repetitions, "Timed repetitions per cell (minimum 5)")
      ->check(CLI::Range(std::size_t{5}, std::size_t{1000000}))
      ->capture_default_str();
  bench->add_option("--warmup", o.warmup, "Discarded warmup runs")->capture_default_str();
  bench->add_option("--seed", o.seed, "Corpus seed")->capture_default_str();
  bench->add_option("--strategy", o.strategies, "Strategies to time (default id,xpath,sesoap)")
      ->delimiter(',')
      ->check(strategy_check);
  bench->add_option("--out", o.out, "CSV records file");
  bench->add_option("--plot", o.plot, "Plot data file (size vs totals)");
  add_key(bench);
  add_format(bench);

  auto* demo = app.add_subcommand("demo", "Walk through the wrapping story: sign by id, attack, then SESoap");
  demo->add_option("--in", o.in, "Unsigned envelope (default: fig3_pre.xml in the fixture directory)");
  demo->add_option("--body-id", o.body_id, "wsu:Id of its Body")->capture_default_str();
  add_key(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*sign) return cmd_sign(o);
    if (*verify) return cmd_verify(o);
    if (*attack) return cmd_attack(o);
    if (*matrix) return cmd_matrix(o);
    if (*bench) return cmd_bench(o);
    if (*demo) return cmd_demo(o);
  } catch (const ExitWith& e) {
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "soapguard: " << e.what() << '\n';
    return exit_internal;
  }
  return exit_usage;
}
