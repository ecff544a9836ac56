// Copyright 2026 The Slotforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to the slotforge pipeline: corpus ingestion, text-to-text
 * example construction, prediction loading and fetching, TransM snapping and
 * exact-match evaluation.
 *
 * All objects are opaque handles released with their matching *_free
 * function. Functions returning sf_status leave a description of the last
 * failure in sf_last_error(), which is per-thread. Strings returned through
 * char** out-parameters are heap allocated and released with
 * sf_string_free(). All text is UTF-8.
 */

#ifndef SLOTFORGE_SLOTFORGE_H_
#define SLOTFORGE_SLOTFORGE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SLOTFORGE_BUILDING)
#    define SLOTFORGE_API __declspec(dllexport)
#  else
#    define SLOTFORGE_API __declspec(dllimport)
#  endif
#else
#  define SLOTFORGE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the exit codes of the slotforge command-line tool. */
typedef enum sf_status {
  SF_OK = 0,
  SF_ERR_USAGE = 1,
  SF_ERR_DATA = 2,
  SF_ERR_REMOTE = 3,
  SF_ERR_IO = 4,
  SF_ERR_INTERNAL = 5
} sf_status;

typedef struct sf_policy sf_policy;
typedef struct sf_corpus sf_corpus;
typedef struct sf_examples sf_examples;
typedef struct sf_predictions sf_predictions;

SLOTFORGE_API const char* sf_version(void);
SLOTFORGE_API const char* sf_last_error(void);
SLOTFORGE_API void sf_string_free(char* s);

/* ---- comparison policy ------------------------------------------------- */

/* Uncased comparison with "not specified" as the only null answer. */
SLOTFORGE_API sf_policy* sf_policy_new(void);
SLOTFORGE_API void sf_policy_free(sf_policy* policy);
SLOTFORGE_API sf_status sf_policy_set_uncased(sf_policy* policy, int uncased);
SLOTFORGE_API sf_status sf_policy_clear_null_answers(sf_policy* policy);
SLOTFORGE_API sf_status sf_policy_add_null_answer(sf_policy* policy,
                                                  const char* answer);

/* ---- corpus ------------------------------------------------------------ */

/* policy may be NULL for the defaults. */
SLOTFORGE_API sf_status sf_corpus_load(const char* path, const sf_policy* policy,
                                       sf_corpus** out);
SLOTFORGE_API sf_status sf_corpus_parse(const char* data, size_t size,
                                        const sf_policy* policy, sf_corpus** out);
SLOTFORGE_API void sf_corpus_free(sf_corpus* corpus);
SLOTFORGE_API size_t sf_corpus_tweet_count(const sf_corpus* corpus);
SLOTFORGE_API size_t sf_corpus_slot_count(const sf_corpus* corpus);
/* One event example plus one per slot, for every tweet. */
SLOTFORGE_API size_t sf_corpus_example_count(const sf_corpus* corpus);
/* JSON array of {"tweet_id", "slot", "message"}; "[]" when valid. */
SLOTFORGE_API sf_status sf_corpus_validate(const sf_corpus* corpus,
                                           char** report_json);
SLOTFORGE_API sf_status sf_corpus_split(const sf_corpus* corpus, double ratio,
                                        uint64_t seed, sf_corpus** train,
                                        sf_corpus** validation);
SLOTFORGE_API sf_status sf_corpus_save(const sf_corpus* corpus, const char* path);

/* ---- examples ---------------------------------------------------------- */

typedef struct sf_length_profile {
  size_t max_source_tokens;
  size_t max_target_tokens;
  size_t sources_over_cap; /* proxy count above 473 */
  size_t targets_over_cap; /* proxy count above 78 */
} sf_length_profile;

/* question_bank_path may be NULL; a bank file overrides the default
 * questions per event. */
SLOTFORGE_API sf_status sf_examples_build(const sf_corpus* corpus,
                                          const char* question_bank_path,
                                          int all_event_questions,
                                          sf_examples** out);
SLOTFORGE_API sf_status sf_examples_load(const char* path, sf_examples** out);
SLOTFORGE_API void sf_examples_free(sf_examples* examples);
SLOTFORGE_API size_t sf_examples_count(const sf_examples* examples);
SLOTFORGE_API sf_status sf_examples_profile(const sf_examples* examples,
                                            sf_length_profile* out);
SLOTFORGE_API sf_status sf_examples_save(const sf_examples* examples,
                                         const char* path);

/* ---- predictions ------------------------------------------------------- */

SLOTFORGE_API sf_status sf_predictions_load(const char* path,
                                            sf_predictions** out);
SLOTFORGE_API void sf_predictions_free(sf_predictions* predictions);
SLOTFORGE_API size_t sf_predictions_count(const sf_predictions* predictions);
SLOTFORGE_API sf_status sf_predictions_save(const sf_predictions* predictions,
                                            const char* path);

typedef struct sf_fetch_config {
  const char* endpoint;     /* http://host:port[/base]; NULL reads the env */
  size_t batch_size;        /* default 16 */
  int max_retries;          /* default 3 */
  unsigned timeout_ms;      /* default 30000 */
  unsigned backoff_ms;      /* first retry delay, doubled each retry */
  size_t max_in_flight;     /* concurrent batches, default 1 */
  const char* bearer_token; /* may be NULL */
} sf_fetch_config;

SLOTFORGE_API void sf_fetch_config_init(sf_fetch_config* config);

/* Sends the slot examples (event examples are skipped) to POST /generate.
 * A NULL endpoint falls back to SLOTFORGE_GEN_ENDPOINT. */
SLOTFORGE_API sf_status sf_predictions_fetch(const sf_fetch_config* config,
                                             const sf_examples* examples,
                                             sf_predictions** out);

/* ---- TransM and evaluation --------------------------------------------- */

/* Snaps every prediction onto its slot's candidates. out_path, snapped and
 * errors_json may each be NULL. errors_json receives a JSON array of keyed
 * errors ("[]" on success); on unknown keys returns SF_ERR_DATA and writes
 * nothing. */
SLOTFORGE_API sf_status sf_transform(const sf_predictions* raw,
                                     const sf_corpus* corpus,
                                     const char* out_path,
                                     sf_predictions** snapped,
                                     char** errors_json);

/* Writes into out_dir:
 *   snapped == NULL: report_<run_label>.json and unmatched.jsonl
 *   otherwise:       report_raw.json, report_post.json, underestimation.json
 *                    and unmatched.jsonl
 * summary_json (may be NULL) receives the macro scores. */
SLOTFORGE_API sf_status sf_evaluate(const sf_corpus* corpus,
                                    const sf_predictions* raw,
                                    const sf_predictions* snapped,
                                    const char* run_label,
                                    const char* out_dir,
                                    char** summary_json);

typedef struct sf_snap_result {
  size_t chosen_index;
  size_t distance;
  int64_t normalized_num;
  int64_t normalized_den;
  int exact;
} sf_snap_result;

SLOTFORGE_API sf_status sf_levenshtein(const char* a, const char* b, size_t* out);
SLOTFORGE_API sf_status sf_normalized_distance(const char* prediction,
                                               const char* candidate,
                                               int uncased, int64_t* num,
                                               int64_t* den);
SLOTFORGE_API sf_status sf_transm(const char* prediction,
                                  const char* const* candidates,
                                  size_t candidate_count, int uncased,
                                  sf_snap_result* out);
SLOTFORGE_API sf_status sf_render_source(const char* context,
                                         const char* question,
                                         const char* const* choices,
                                         size_t choice_count, char** out);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* SLOTFORGE_SLOTFORGE_H_ */
