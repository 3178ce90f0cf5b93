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

#include <soapguard/soapguard.h>

#include "attacks.hpp"
#include "bench.hpp"
#include "c14n.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "query.hpp"
#include "xmlsig.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

using namespace soapguard;

struct sg_envelope {
  soap::Envelope env;
};

struct sg_keypair {
  crypto::KeyPair key;
};

struct sg_trust_store {
  crypto::TrustStore store;
};

struct sg_verify_report {
  soap::Envelope env; // the report refers to nodes of this copy
  sig::VerificationReport report;
  std::vector<std::string> mismatches;
};

struct sg_policy_report {
  harness::PolicyReport report;
};

struct sg_matrix {
  harness::DefenseMatrix matrix;
};

struct sg_bench_result {
  std::vector<bench::BenchRecord> records;
};

namespace {

thread_local std::string last_error;

sg_status fail(sg_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
sg_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return SG_OK;
  } catch (const Error& e) {
    return fail(static_cast<sg_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SG_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p)
    throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(bool cond, const char* what) {
  if (!cond)
    throw Error(ErrorCode::invalid_argument, what);
}

sig::Strategy to_core(sg_strategy s) {
  switch (s) {
  case SG_STRATEGY_ID: return sig::Strategy::id;
  case SG_STRATEGY_XPATH: return sig::Strategy::xpath;
  case SG_STRATEGY_SESOAP: return sig::Strategy::sesoap;
  case SG_STRATEGY_INLINE: return sig::Strategy::inline_account;
  }
  throw Error(ErrorCode::invalid_argument, "unknown strategy value " + std::to_string(static_cast<int>(s)));
}

sg_strategy from_core(sig::Strategy s) {
  switch (s) {
  case sig::Strategy::id: return SG_STRATEGY_ID;
  case sig::Strategy::xpath: return SG_STRATEGY_XPATH;
  case sig::Strategy::sesoap: return SG_STRATEGY_SESOAP;
  case sig::Strategy::inline_account: return SG_STRATEGY_INLINE;
  }
  return SG_STRATEGY_ID;
}

attacks::AttackKind to_core(sg_attack a) {
  switch (a) {
  case SG_ATTACK_SIMPLE: return attacks::AttackKind::simple_ancestry;
  case SG_ATTACK_OPTIONAL: return attacks::AttackKind::optional_element;
  case SG_ATTACK_SIBLING_VALUE: return attacks::AttackKind::sibling_value;
  case SG_ATTACK_SIBLING_ORDER: return attacks::AttackKind::sibling_order;
  case SG_ATTACK_COUNT_PRESERVING: return attacks::AttackKind::count_preserving_simple;
  }
  throw Error(ErrorCode::invalid_argument, "unknown attack value " + std::to_string(static_cast<int>(a)));
}

sg_attack from_core(attacks::AttackKind a) {
  switch (a) {
  case attacks::AttackKind::simple_ancestry: return SG_ATTACK_SIMPLE;
  case attacks::AttackKind::optional_element: return SG_ATTACK_OPTIONAL;
  case attacks::AttackKind::sibling_value: return SG_ATTACK_SIBLING_VALUE;
  case attacks::AttackKind::sibling_order: return SG_ATTACK_SIBLING_ORDER;
  case attacks::AttackKind::count_preserving_simple: return SG_ATTACK_COUNT_PRESERVING;
  }
  return SG_ATTACK_SIMPLE;
}

sig::ReferenceTarget parse_target(std::string_view text) {
  require(!text.empty(), "empty target");
  if (text.front() == '/')
    return sig::PathTarget{xml::parse_path(text)};
  if (text.front() == '#')
    text.remove_prefix(1);
  require(!text.empty(), "empty target id");
  return sig::IdTarget{std::string(text)};
}

} // namespace

extern "C" {

const char* sg_version(void) { return "0.1.0"; }

const char* sg_last_error(void) { return last_error.c_str(); }

const char* sg_status_name(sg_status status) {
  if (status == SG_OK)
    return "Ok";
  if (status == SG_ERR_INTERNAL)
    return "Internal";
  if (status >= SG_ERR_MALFORMED_XML && status <= SG_ERR_IO)
    return error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
  return "Unknown";
}

void sg_string_free(char* s) { std::free(s); }

sg_status sg_strategy_parse(const char* text, sg_strategy* out) {
  return guarded([&] {
    require(text && out, "null argument");
    auto s = sig::parse_strategy(text);
    if (!s)
      throw Error(ErrorCode::invalid_argument, std::string("unknown strategy '") + text + "'");
    *out = from_core(*s);
  });
}

const char* sg_strategy_name(sg_strategy s) {
  try {
    return sig::strategy_name(to_core(s));
  } catch (...) {
    return "?";
  }
}

sg_status sg_attack_parse(const char* text, sg_attack* out) {
  return guarded([&] {
    require(text && out, "null argument");
    auto a = attacks::parse_attack(text);
    if (!a)
      throw Error(ErrorCode::invalid_argument, std::string("unknown attack '") + text + "'");
    *out = from_core(*a);
  });
}

const char* sg_attack_name(sg_attack a) {
  try {
    return attacks::attack_name(to_core(a));
  } catch (...) {
    return "?";
  }
}

sg_status sg_envelope_parse(const char* text, size_t len, sg_envelope** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new sg_envelope{soap::Envelope::parse(std::string_view(text, len))};
  });
}

sg_status sg_envelope_load(const char* path, sg_envelope** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new sg_envelope{soap::Envelope::load(path)};
  });
}

sg_status sg_envelope_serialize(const sg_envelope* env, int indent, char** out) {
  return guarded([&] {
    require(env && out && indent >= 0, "bad argument");
    *out = dup_string(xml::serialize(env->env.doc(), {.indent = indent}));
  });
}

sg_status sg_envelope_save(const sg_envelope* env, const char* path, int indent) {
  return guarded([&] {
    require(env && path && indent >= 0, "bad argument");
    xml::save_file(path, env->env.doc(), {.indent = indent});
  });
}

sg_status sg_envelope_canonicalize(const sg_envelope* env, char** out) {
  return guarded([&] {
    require(env && out, "null argument");
    *out = dup_string(xml::canonicalize(env->env.doc().root(), env->env.doc()));
  });
}

void sg_envelope_free(sg_envelope* env) { delete env; }

sg_status sg_keypair_from_seed(const char* seed, sg_keypair** out) {
  return guarded([&] {
    require(seed && out, "null argument");
    require(*seed != '\0', "empty key seed");
    *out = new sg_keypair{crypto::KeyPair::generate(seed)};
  });
}

const char* sg_keypair_name(const sg_keypair* key) { return key ? key->key.name().c_str() : ""; }

void sg_keypair_free(sg_keypair* key) { delete key; }

sg_status sg_trust_store_new(sg_trust_store** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new sg_trust_store{};
  });
}

sg_status sg_trust_store_add(sg_trust_store* store, const sg_keypair* key) {
  return guarded([&] {
    require(store && key, "null argument");
    store->store.add(key->key);
  });
}

void sg_trust_store_free(sg_trust_store* store) { delete store; }

sg_status sg_sign(const sg_envelope* env, sg_strategy strategy, const char* const* targets, size_t n_targets,
                  const sg_keypair* key, sg_envelope** out) {
  return guarded([&] {
    require(env && key && out && (targets || n_targets == 0), "null argument");
    std::vector<sig::ReferenceTarget> parsed;
    for (size_t i = 0; i < n_targets; ++i) {
      require(targets[i], "null target");
      parsed.push_back(parse_target(targets[i]));
    }
    *out = new sg_envelope{sig::sign(env->env, to_core(strategy), parsed, key->key)};
  });
}

sg_status sg_verify(const sg_envelope* env, const sg_keypair* key, const sg_trust_store* trust,
                    sg_verify_report** out) {
  return guarded([&] {
    require(env && out && (key || trust), "null argument");
    auto report = key ? sig::verify(env->env, key->key, trust ? &trust->store : nullptr)
                      : sig::verify(env->env, trust->store);
    auto r = std::make_unique<sg_verify_report>(sg_verify_report{env->env, std::move(report), {}});
    r->mismatches = harness::mismatch_warnings(r->env, r->report);
    *out = r.release();
  });
}

int sg_verify_report_valid(const sg_verify_report* r) { return r && r->report.valid ? 1 : 0; }

size_t sg_verify_report_signature_count(const sg_verify_report* r) { return r ? r->report.signatures.size() : 0; }

size_t sg_verify_report_mismatch_count(const sg_verify_report* r) { return r ? r->mismatches.size() : 0; }

sg_status sg_verify_report_render(const sg_verify_report* r, int machine, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(harness::render_verification(r->env, r->report, machine != 0));
  });
}

void sg_verify_report_free(sg_verify_report* r) { delete r; }

sg_status sg_policy_check(const sg_envelope* env, const sg_trust_store* trust, sg_policy_report** out) {
  return guarded([&] {
    require(env && trust && out, "null argument");
    *out = new sg_policy_report{harness::check_policy(env->env, trust->store)};
  });
}

int sg_policy_report_passed(const sg_policy_report* r) { return r && r->report.overall ? 1 : 0; }

int sg_policy_report_check(const sg_policy_report* r, int check) {
  if (!r || check < 1 || check > 4)
    return 0;
  return r->report.passed[static_cast<size_t>(check - 1)] ? 1 : 0;
}

sg_status sg_policy_report_render(const sg_policy_report* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(harness::render_policy(r->report));
  });
}

void sg_policy_report_free(sg_policy_report* r) { delete r; }

sg_status sg_attack_apply(const sg_envelope* env, sg_attack attack, const sg_attack_options* options,
                          sg_envelope** out) {
  return guarded([&] {
    require(env && out, "null argument");
    sg_attack_options opt{};
    if (options)
      opt = *options;
    std::string new_id = opt.new_id && *opt.new_id ? opt.new_id : "newCMPE";
    auto payload = [&] {
      if (!opt.payload_xml)
        return attacks::default_payload();
      return xml::parse(opt.payload_xml);
    };
    std::optional<attacks::AttackResult> result;
    switch (to_core(attack)) {
    case attacks::AttackKind::simple_ancestry: {
      auto p = payload();
      result = attacks::simple_ancestry(env->env, p.root(), new_id);
      break;
    }
    case attacks::AttackKind::optional_element:
      result = attacks::optional_element(env->env, opt.target && *opt.target ? opt.target : "wsa:ReplyTo");
      break;
    case attacks::AttackKind::sibling_value:
      result = attacks::sibling_value(env->env);
      break;
    case attacks::AttackKind::sibling_order: {
      std::vector<size_t> perm;
      if (opt.permutation && opt.permutation_len > 0) {
        perm.assign(opt.permutation, opt.permutation + opt.permutation_len);
      } else {
        perm.resize(harness::record_order(env->env).ids.size());
        for (size_t i = 0; i < perm.size(); ++i)
          perm[i] = perm.size() - 1 - i;
      }
      result = attacks::sibling_order(env->env, perm);
      break;
    }
    case attacks::AttackKind::count_preserving_simple: {
      auto p = payload();
      result = attacks::count_preserving_simple(env->env, p.root(), new_id);
      break;
    }
    }
    *out = new sg_envelope{std::move(result->doc)};
  });
}

sg_status sg_matrix_run(const sg_envelope* base, const sg_keypair* key, sg_matrix** out) {
  return guarded([&] {
    require(base && key && out, "null argument");
    *out = new sg_matrix{harness::defense_matrix(harness::all_strategies, attacks::all_attacks, base->env, key->key)};
  });
}

sg_status sg_matrix_render(const sg_matrix* m, int machine, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = dup_string(machine ? harness::render_matrix_machine(m->matrix) : harness::render_matrix_table(m->matrix));
  });
}

sg_status sg_matrix_compare(const sg_matrix* m, const char* expected_machine, int* matches, char** diff) {
  return guarded([&] {
    require(m && expected_machine && matches && diff, "null argument");
    auto lines = harness::diff_matrix(expected_machine, m->matrix);
    std::string text;
    for (const auto& l : lines)
      text += l + "\n";
    *diff = dup_string(text);
    *matches = lines.empty() ? 1 : 0;
  });
}

void sg_matrix_free(sg_matrix* m) { delete m; }

sg_status sg_bench_run(const sg_bench_config* config, const sg_keypair* key, sg_bench_result** out) {
  return guarded([&] {
    require(key && out, "null argument");
    bench::BenchConfig cfg;
    if (config) {
      if (config->sizes && config->n_sizes)
        cfg.sizes.assign(config->sizes, config->sizes + config->n_sizes);
      if (config->repetitions)
        cfg.repetitions = config->repetitions;
      if (config->warmup)
        cfg.warmup = config->warmup;
      if (config->seed)
        cfg.seed = config->seed;
      if (config->strategies && config->n_strategies) {
        cfg.strategies.clear();
        for (size_t i = 0; i < config->n_strategies; ++i)
          cfg.strategies.push_back(to_core(config->strategies[i]));
      }
    }
    *out = new sg_bench_result{bench::run_benchmark(cfg, key->key)};
  });
}

size_t sg_bench_record_count(const sg_bench_result* r) { return r ? r->records.size() : 0; }

sg_status sg_bench_csv(const sg_bench_result* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(bench::to_csv(r->records, bench::environment_preamble()));
  });
}

sg_status sg_bench_plot_data(const sg_bench_result* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(bench::plot_data(r->records));
  });
}

sg_status sg_bench_trends(const sg_bench_result* r, int* all_passed, char** report) {
  return guarded([&] {
    require(r && all_passed && report, "null argument");
    bench::TrendReport t = bench::check_trends(r->records);
    *report = dup_string(bench::render_trends(t));
    *all_passed = t.all_passed() ? 1 : 0;
  });
}

void sg_bench_result_free(sg_bench_result* r) { delete r; }

sg_status sg_demo(const sg_envelope* unsigned_env, const char* body_id, const sg_keypair* key, char** transcript) {
  return guarded([&] {
    require(unsigned_env && body_id && *body_id && key && transcript, "bad argument");
    *transcript = dup_string(harness::demo_transcript(unsigned_env->env, body_id, key->key));
  });
}

} // extern "C"
