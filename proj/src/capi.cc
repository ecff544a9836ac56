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

#include "slotforge/slotforge.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <map>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.h"
#include "editdist.h"
#include "error.h"
#include "io.h"
#include "metrics.h"
#include "predict.h"
#include "seqgen.h"

struct sf_policy {
  bool uncased = true;
  std::vector<std::string> null_answers{"not specified"};

  slotforge::TextPolicy build() const { return {uncased, null_answers}; }
};

struct sf_corpus {
  slotforge::Corpus corpus;
};

struct sf_examples {
  std::vector<slotforge::Example> examples;
};

struct sf_predictions {
  std::vector<slotforge::RawPrediction> predictions;
};

namespace {

using nlohmann::json;
namespace sf = slotforge;

thread_local std::string g_last_error;

sf_status fail(sf_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
sf_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return SF_OK;
  } catch (const sf::Error& e) {
    return fail(static_cast<sf_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SF_ERR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SF_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(SF_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void require(bool condition, const char* message) {
  if (!condition) throw sf::usage_error(message);
}

std::string serialize_unmatched(const std::vector<sf::UnmatchedPrediction>& list) {
  std::string out;
  for (const auto& u : list) {
    out += sf::dump_record(sf::unmatched_to_json(u));
    out += '\n';
  }
  return out;
}

json macro_summary(const sf::EvaluationReport& r) {
  return {{"precision", sf::format_fixed(r.macro.precision)},
          {"recall", sf::format_fixed(r.macro.recall)},
          {"f1", sf::format_fixed(r.macro.f1)}};
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

extern "C" {

const char* sf_version(void) { return "0.1.0"; }

const char* sf_last_error(void) { return g_last_error.c_str(); }

void sf_string_free(char* s) { std::free(s); }

sf_policy* sf_policy_new(void) { return new (std::nothrow) sf_policy(); }

void sf_policy_free(sf_policy* policy) { delete policy; }

sf_status sf_policy_set_uncased(sf_policy* policy, int uncased) {
  return guarded([&] {
    require(policy != nullptr, "policy is NULL");
    policy->uncased = uncased != 0;
  });
}

sf_status sf_policy_clear_null_answers(sf_policy* policy) {
  return guarded([&] {
    require(policy != nullptr, "policy is NULL");
    policy->null_answers.clear();
  });
}

sf_status sf_policy_add_null_answer(sf_policy* policy, const char* answer) {
  return guarded([&] {
    require(policy != nullptr && answer != nullptr, "NULL argument");
    require(*answer != '\0', "null answer must be non-empty");
    policy->null_answers.emplace_back(answer);
  });
}

sf_status sf_corpus_load(const char* path, const sf_policy* policy,
                         sf_corpus** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "NULL argument");
    *out = nullptr;
    const sf::TextPolicy text_policy = policy ? policy->build() : sf::TextPolicy();
    *out = new sf_corpus{sf::load_corpus(path, text_policy)};
  });
}

sf_status sf_corpus_parse(const char* data, size_t size, const sf_policy* policy,
                          sf_corpus** out) {
  return guarded([&] {
    require((data != nullptr || size == 0) && out != nullptr, "NULL argument");
    *out = nullptr;
    std::istringstream in(std::string(data ? data : "", size));
    const sf::TextPolicy text_policy = policy ? policy->build() : sf::TextPolicy();
    *out = new sf_corpus{sf::parse_corpus(in, text_policy)};
  });
}

void sf_corpus_free(sf_corpus* corpus) { delete corpus; }

size_t sf_corpus_tweet_count(const sf_corpus* corpus) {
  return corpus ? corpus->corpus.size() : 0;
}

size_t sf_corpus_slot_count(const sf_corpus* corpus) {
  return corpus ? corpus->corpus.stats().slot_annotations : 0;
}

size_t sf_corpus_example_count(const sf_corpus* corpus) {
  return corpus ? corpus->corpus.stats().total_examples : 0;
}

sf_status sf_corpus_validate(const sf_corpus* corpus, char** report_json) {
  return guarded([&] {
    require(corpus != nullptr && report_json != nullptr, "NULL argument");
    json report = json::array();
    for (const auto& v : sf::validate_corpus(corpus->corpus)) {
      report.push_back(
          {{"tweet_id", v.tweet_id}, {"slot", v.slot_name}, {"message", v.message}});
    }
    *report_json = copy_string(report.dump());
  });
}

sf_status sf_corpus_split(const sf_corpus* corpus, double ratio, uint64_t seed,
                          sf_corpus** train, sf_corpus** validation) {
  return guarded([&] {
    require(corpus && train && validation, "NULL argument");
    auto split = sf::split_train_validation(corpus->corpus, ratio, seed);
    auto t = std::make_unique<sf_corpus>(sf_corpus{std::move(split.train)});
    auto v = std::make_unique<sf_corpus>(sf_corpus{std::move(split.validation)});
    *train = t.release();
    *validation = v.release();
  });
}

sf_status sf_corpus_save(const sf_corpus* corpus, const char* path) {
  return guarded([&] {
    require(corpus != nullptr && path != nullptr, "NULL argument");
    sf::save_corpus(corpus->corpus, path);
  });
}

sf_status sf_examples_build(const sf_corpus* corpus,
                            const char* question_bank_path,
                            int all_event_questions, sf_examples** out) {
  return guarded([&] {
    require(corpus != nullptr && out != nullptr, "NULL argument");
    *out = nullptr;
    const sf::QuestionBank bank = question_bank_path
                                      ? sf::QuestionBank::load(question_bank_path)
                                      : sf::QuestionBank::defaults();
    sf::BuildOptions options;
    options.all_event_questions = all_event_questions != 0;
    *out = new sf_examples{sf::build_all(corpus->corpus, bank, options)};
  });
}

sf_status sf_examples_load(const char* path, sf_examples** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "NULL argument");
    *out = nullptr;
    *out = new sf_examples{sf::load_examples(path)};
  });
}

void sf_examples_free(sf_examples* examples) { delete examples; }

size_t sf_examples_count(const sf_examples* examples) {
  return examples ? examples->examples.size() : 0;
}

sf_status sf_examples_profile(const sf_examples* examples,
                              sf_length_profile* out) {
  return guarded([&] {
    require(examples != nullptr && out != nullptr, "NULL argument");
    const auto p = sf::profile_lengths(examples->examples);
    *out = {p.max_source_tokens, p.max_target_tokens, p.sources_over_cap,
            p.targets_over_cap};
  });
}

sf_status sf_examples_save(const sf_examples* examples, const char* path) {
  return guarded([&] {
    require(examples != nullptr && path != nullptr, "NULL argument");
    sf::save_examples(examples->examples, path);
  });
}

sf_status sf_predictions_load(const char* path, sf_predictions** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "NULL argument");
    *out = nullptr;
    *out = new sf_predictions{sf::load_predictions(path)};
  });
}

void sf_predictions_free(sf_predictions* predictions) { delete predictions; }

size_t sf_predictions_count(const sf_predictions* predictions) {
  return predictions ? predictions->predictions.size() : 0;
}

sf_status sf_predictions_save(const sf_predictions* predictions,
                              const char* path) {
  return guarded([&] {
    require(predictions != nullptr && path != nullptr, "NULL argument");
    sf::save_predictions(predictions->predictions, path);
  });
}

void sf_fetch_config_init(sf_fetch_config* config) {
  if (config == nullptr) return;
  const sf::FetchConfig defaults;
  config->endpoint = nullptr;
  config->batch_size = defaults.batch_size;
  config->max_retries = defaults.max_retries;
  config->timeout_ms = static_cast<unsigned>(defaults.timeout.count());
  config->backoff_ms = static_cast<unsigned>(defaults.initial_backoff.count());
  config->max_in_flight = defaults.max_in_flight;
  config->bearer_token = nullptr;
}

sf_status sf_predictions_fetch(const sf_fetch_config* config,
                               const sf_examples* examples,
                               sf_predictions** out) {
  return guarded([&] {
    require(config != nullptr && examples != nullptr && out != nullptr,
            "NULL argument");
    *out = nullptr;
    sf::FetchConfig fetch;
    if (config->endpoint != nullptr && *config->endpoint != '\0') {
      fetch.endpoint = config->endpoint;
    } else if (const char* env = std::getenv(sf::kEndpointEnvVar)) {
      fetch.endpoint = env;
    }
    require(!fetch.endpoint.empty(),
            "no generation endpoint (flag or SLOTFORGE_GEN_ENDPOINT)");
    fetch.batch_size = config->batch_size;
    fetch.max_retries = config->max_retries;
    fetch.timeout = std::chrono::milliseconds(config->timeout_ms);
    fetch.initial_backoff = std::chrono::milliseconds(config->backoff_ms);
    fetch.max_in_flight = config->max_in_flight;
    if (config->bearer_token) fetch.bearer_token = config->bearer_token;

    std::vector<sf::Example> slots;
    for (const auto& ex : examples->examples) {
      if (ex.key.kind == sf::ExampleKind::kSlot) slots.push_back(ex);
    }
    *out = new sf_predictions{sf::fetch_predictions(fetch, slots)};
  });
}

sf_status sf_transform(const sf_predictions* raw, const sf_corpus* corpus,
                       const char* out_path, sf_predictions** snapped,
                       char** errors_json) {
  if (snapped) *snapped = nullptr;
  if (errors_json) *errors_json = nullptr;
  return guarded([&] {
    require(raw != nullptr && corpus != nullptr, "NULL argument");
    const auto result = sf::transform_run(raw->predictions, corpus->corpus);
    json errors = json::array();
    for (const auto& e : result.errors) {
      errors.push_back(
          {{"tweet_id", e.key.tweet_id}, {"slot", e.key.slot}, {"error", e.message}});
    }
    if (errors_json) *errors_json = copy_string(errors.dump());
    if (!result.errors.empty()) {
      throw sf::data_error(std::to_string(result.errors.size()) +
                           " prediction(s) could not be transformed; first: " +
                           result.errors.front().message);
    }
    if (out_path) sf::atomic_write(out_path, sf::serialize_snapped(result.snapped));
    if (snapped) {
      auto out = std::make_unique<sf_predictions>();
      for (const auto& s : result.snapped) out->predictions.push_back({s.key, s.snapped});
      *snapped = out.release();
    }
  });
}

sf_status sf_evaluate(const sf_corpus* corpus, const sf_predictions* raw,
                      const sf_predictions* snapped, const char* run_label,
                      const char* out_dir, char** summary_json) {
  if (summary_json) *summary_json = nullptr;
  return guarded([&] {
    require(corpus != nullptr && raw != nullptr && out_dir != nullptr,
            "NULL argument");
    const std::filesystem::path dir(out_dir);
    const auto& c = corpus->corpus;
    const auto raw_alignment = sf::align(raw->predictions, c);
    if (!raw_alignment.errors.empty()) {
      throw sf::data_error(raw_alignment.errors.front().message);
    }
    json summary;
    if (snapped == nullptr) {
      const std::string label = run_label && *run_label ? run_label : "raw";
      require(label.find_first_of("/\\") == std::string::npos,
              "run label must not contain path separators");
      const auto report = sf::evaluate_run(c, raw_alignment.predictions, label);
      const auto unmatched = sf::unmatched_predictions(c, raw_alignment.predictions);
      sf::atomic_write(dir / ("report_" + label + ".json"),
                       pretty(sf::report_to_json(report)));
      sf::atomic_write(dir / "unmatched.jsonl", serialize_unmatched(unmatched));
      summary = {{label, macro_summary(report)},
                 {"missing_predictions", raw_alignment.missing.size()},
                 {"unmatched", unmatched.size()}};
    } else {
      const auto post_alignment = sf::align(snapped->predictions, c);
      if (!post_alignment.errors.empty()) {
        throw sf::data_error(post_alignment.errors.front().message);
      }
      const auto report = sf::underestimation(c, raw_alignment.predictions,
                                              post_alignment.predictions);
      sf::atomic_write(dir / "report_raw.json", pretty(sf::report_to_json(report.raw)));
      sf::atomic_write(dir / "report_post.json",
                       pretty(sf::report_to_json(report.post)));
      sf::atomic_write(dir / "underestimation.json",
                       pretty(sf::underestimation_to_json(report)));
      sf::atomic_write(dir / "unmatched.jsonl", serialize_unmatched(report.unmatched));
      summary = {{"raw", macro_summary(report.raw)},
                 {"post", macro_summary(report.post)},
                 {"delta", sf::underestimation_to_json(report)["delta"]},
                 {"missing_predictions", raw_alignment.missing.size()},
                 {"unmatched", report.unmatched.size()}};
    }
    if (summary_json) *summary_json = copy_string(summary.dump());
  });
}

sf_status sf_levenshtein(const char* a, const char* b, size_t* out) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && out != nullptr, "NULL argument");
    *out = sf::levenshtein_utf8(a, b);
  });
}

sf_status sf_normalized_distance(const char* prediction, const char* candidate,
                                 int uncased, int64_t* num, int64_t* den) {
  return guarded([&] {
    require(prediction && candidate && num && den, "NULL argument");
    const auto r = sf::normalized_distance(prediction, candidate, uncased != 0);
    *num = r.numerator();
    *den = r.denominator();
  });
}

sf_status sf_transm(const char* prediction, const char* const* candidates,
                    size_t candidate_count, int uncased, sf_snap_result* out) {
  return guarded([&] {
    require(prediction != nullptr && out != nullptr, "NULL argument");
    require(candidates != nullptr || candidate_count == 0, "NULL candidates");
    std::vector<std::string> list;
    for (size_t i = 0; i < candidate_count; ++i) {
      require(candidates[i] != nullptr, "NULL candidate");
      list.emplace_back(candidates[i]);
    }
    const auto r = sf::transm(prediction, list, uncased != 0);
    *out = {r.chosen_index, r.distance, r.normalized_distance.numerator(),
            r.normalized_distance.denominator(), r.exact ? 1 : 0};
  });
}

sf_status sf_render_source(const char* context, const char* question,
                           const char* const* choices, size_t choice_count,
                           char** out) {
  return guarded([&] {
    require(context != nullptr && question != nullptr && out != nullptr,
            "NULL argument");
    require(choices != nullptr || choice_count == 0, "NULL choices");
    std::vector<std::string> list;
    for (size_t i = 0; i < choice_count; ++i) {
      require(choices[i] != nullptr, "NULL choice");
      list.emplace_back(choices[i]);
    }
    *out = copy_string(sf::render_source(context, question, list));
  });
}

}  // extern "C"
