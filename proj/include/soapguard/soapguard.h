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

/*
  soapguard C API.

  Every handle is opaque and owned by the caller once returned; release it
  with the matching *_free function (NULL is accepted). Functions return an
  sg_status; on failure sg_last_error() describes what went wrong on the
  calling thread until the next call into the library. Strings returned
  through char** are heap-allocated and released with sg_string_free.
*/

#ifndef SOAPGUARD_H
#define SOAPGUARD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SG_API __declspec(dllexport)
#else
#define SG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sg_status {
  SG_OK = 0,
  SG_ERR_MALFORMED_XML = 1,
  SG_ERR_NODE_NOT_IN_DOCUMENT,
  SG_ERR_TARGET_NOT_FOUND,
  SG_ERR_AMBIGUOUS_PATH,
  SG_ERR_ALREADY_SIGNED,
  SG_ERR_NO_SIGNATURE,
  SG_ERR_UNKNOWN_KEY,
  SG_ERR_NO_SIGNED_BODY,
  SG_ERR_HEADER_NOT_FOUND,
  SG_ERR_NO_TIMESTAMP,
  SG_ERR_NOT_ENOUGH_SIGNED_SIBLINGS,
  SG_ERR_BAD_PERMUTATION,
  SG_ERR_NO_SOAP_ACCOUNT,
  SG_ERR_CANNOT_PRESERVE_COUNTS,
  SG_ERR_AMBIGUOUS_BODY,
  SG_ERR_NOT_APPLICABLE,
  SG_ERR_INSUFFICIENT_DATA,
  SG_ERR_INVALID_ARGUMENT,
  SG_ERR_IO,
  SG_ERR_INTERNAL = 100
} sg_status;

typedef enum sg_strategy {
  SG_STRATEGY_ID = 0,
  SG_STRATEGY_XPATH,
  SG_STRATEGY_SESOAP,
  SG_STRATEGY_INLINE
} sg_strategy;

typedef enum sg_attack {
  SG_ATTACK_SIMPLE = 0,
  SG_ATTACK_OPTIONAL,
  SG_ATTACK_SIBLING_VALUE,
  SG_ATTACK_SIBLING_ORDER,
  SG_ATTACK_COUNT_PRESERVING
} sg_attack;

typedef struct sg_envelope sg_envelope;
typedef struct sg_keypair sg_keypair;
typedef struct sg_trust_store sg_trust_store;
typedef struct sg_verify_report sg_verify_report;
typedef struct sg_policy_report sg_policy_report;
typedef struct sg_matrix sg_matrix;
typedef struct sg_bench_result sg_bench_result;

SG_API const char* sg_version(void);
SG_API const char* sg_last_error(void);
SG_API const char* sg_status_name(sg_status status);
SG_API void sg_string_free(char* s);

/* Names: strategies accept "id|xpath|sesoap|inline" or the upper-case
   display names, attacks "simple|optional|sibling-value|sibling-order|
   count-preserving" or theirs. */
SG_API sg_status sg_strategy_parse(const char* text, sg_strategy* out);
SG_API const char* sg_strategy_name(sg_strategy s);
SG_API sg_status sg_attack_parse(const char* text, sg_attack* out);
SG_API const char* sg_attack_name(sg_attack a);

/* Envelopes */
SG_API sg_status sg_envelope_parse(const char* text, size_t len, sg_envelope** out);
SG_API sg_status sg_envelope_load(const char* path, sg_envelope** out);
/* indent 0 writes one line */
SG_API sg_status sg_envelope_serialize(const sg_envelope* env, int indent, char** out);
SG_API sg_status sg_envelope_save(const sg_envelope* env, const char* path, int indent);
SG_API sg_status sg_envelope_canonicalize(const sg_envelope* env, char** out);
SG_API void sg_envelope_free(sg_envelope* env);

/* Keys. The seed string fully determines the key pair. */
SG_API sg_status sg_keypair_from_seed(const char* seed, sg_keypair** out);
SG_API const char* sg_keypair_name(const sg_keypair* key);
SG_API void sg_keypair_free(sg_keypair* key);

SG_API sg_status sg_trust_store_new(sg_trust_store** out);
SG_API sg_status sg_trust_store_add(sg_trust_store* store, const sg_keypair* key);
SG_API void sg_trust_store_free(sg_trust_store* store);

/* Signing. A target starting with '/' is an absolute path such as
   /soap:Envelope/soap:Body; anything else is a wsu:Id, with or without a
   leading '#'. ID and XPATH need at least one target, SESOAP and INLINE
   take none. The input envelope is left untouched. */
SG_API sg_status sg_sign(const sg_envelope* env, sg_strategy strategy, const char* const* targets,
                         size_t n_targets, const sg_keypair* key, sg_envelope** out);

/* Verification. Either key or trust may be NULL, not both. When trust is
   given the key is looked up by KeyName there, and an unknown KeyName fails
   with SG_ERR_UNKNOWN_KEY. */
SG_API sg_status sg_verify(const sg_envelope* env, const sg_keypair* key, const sg_trust_store* trust,
                           sg_verify_report** out);
SG_API int sg_verify_report_valid(const sg_verify_report* r);
SG_API size_t sg_verify_report_signature_count(const sg_verify_report* r);
/* References that resolved to something the receiving application does not
   act on. */
SG_API size_t sg_verify_report_mismatch_count(const sg_verify_report* r);
/* machine != 0 selects tab-separated records */
SG_API sg_status sg_verify_report_render(const sg_verify_report* r, int machine, char** out);
SG_API void sg_verify_report_free(sg_verify_report* r);

SG_API sg_status sg_policy_check(const sg_envelope* env, const sg_trust_store* trust, sg_policy_report** out);
SG_API int sg_policy_report_passed(const sg_policy_report* r);
/* check is 1..4 */
SG_API int sg_policy_report_check(const sg_policy_report* r, int check);
SG_API sg_status sg_policy_report_render(const sg_policy_report* r, char** out);
SG_API void sg_policy_report_free(sg_policy_report* r);

/* Attacks. Every field of the options may be zero/NULL for the defaults:
   target "wsa:ReplyTo" (optional element), payload getQuote Symbol="MBI",
   new id "newCMPE", and the reversed signed order (sibling order). */
typedef struct sg_attack_options {
  const char* target;
  const char* payload_xml;
  const char* new_id;
  const size_t* permutation;
  size_t permutation_len;
} sg_attack_options;

SG_API sg_status sg_attack_apply(const sg_envelope* env, sg_attack attack, const sg_attack_options* options,
                                 sg_envelope** out);

/* Defense matrix: every strategy against every attack, using base as the
   unsigned message. */
SG_API sg_status sg_matrix_run(const sg_envelope* base, const sg_keypair* key, sg_matrix** out);
SG_API sg_status sg_matrix_render(const sg_matrix* m, int machine, char** out);
/* *matches is set to 1 when every verdict agrees with the expected machine
   form; *diff receives one line per disagreement (may be empty). */
SG_API sg_status sg_matrix_compare(const sg_matrix* m, const char* expected_machine, int* matches, char** diff);
SG_API void sg_matrix_free(sg_matrix* m);

/* Benchmark. Zero/NULL fields take the defaults: sizes 32000, 128000,
   512000, 1000000, 3150000; 20 repetitions; 2 warmup runs; seed 1;
   strategies ID, XPATH, SESOAP. Repetitions below 5 are rejected. */
typedef struct sg_bench_config {
  const size_t* sizes;
  size_t n_sizes;
  size_t repetitions;
  size_t warmup;
  uint64_t seed;
  const sg_strategy* strategies;
  size_t n_strategies;
} sg_bench_config;

SG_API sg_status sg_bench_run(const sg_bench_config* config, const sg_keypair* key, sg_bench_result** out);
SG_API size_t sg_bench_record_count(const sg_bench_result* r);
SG_API sg_status sg_bench_csv(const sg_bench_result* r, char** out);
SG_API sg_status sg_bench_plot_data(const sg_bench_result* r, char** out);
/* SG_ERR_INSUFFICIENT_DATA when fewer than three sizes were measured. */
SG_API sg_status sg_bench_trends(const sg_bench_result* r, int* all_passed, char** report);
SG_API void sg_bench_result_free(sg_bench_result* r);

/* Sign by id, wrap, verify, then sign the whole envelope, wrap, verify.
   body_id is the wsu:Id of the unsigned envelope's Body. */
SG_API sg_status sg_demo(const sg_envelope* unsigned_env, const char* body_id, const sg_keypair* key,
                         char** transcript);

#ifdef __cplusplus
}
#endif

#endif
