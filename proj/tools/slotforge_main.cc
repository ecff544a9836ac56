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

// slotforge: prepare text-to-text examples from an annotated tweet corpus,
// snap generated answers onto candidate choices and score them.
//
// Sample usage:
//   slotforge prepare --corpus corpus.jsonl --out work --split 0.1 --seed 7
//   slotforge fetch --corpus corpus.jsonl --endpoint http://localhost:8080 --out work
//   slotforge transform --corpus corpus.jsonl --predictions work/predictions.jsonl --out work
//   slotforge evaluate --corpus corpus.jsonl
//       --predictions work/predictions.jsonl --compare raw,post --out work
//
// Exit codes: 0 success, 1 usage error, 2 validation/data error, 3 remote
// service error.

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slotforge/slotforge.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRemote = 3;

struct PolicyDeleter { void operator()(sf_policy* p) const { sf_policy_free(p); } };
struct CorpusDeleter { void operator()(sf_corpus* p) const { sf_corpus_free(p); } };
struct ExamplesDeleter { void operator()(sf_examples* p) const { sf_examples_free(p); } };
struct PredictionsDeleter {
  void operator()(sf_predictions* p) const { sf_predictions_free(p); }
};
struct StringDeleter { void operator()(char* s) const { sf_string_free(s); } };

using PolicyPtr = std::unique_ptr<sf_policy, PolicyDeleter>;
using CorpusPtr = std::unique_ptr<sf_corpus, CorpusDeleter>;
using ExamplesPtr = std::unique_ptr<sf_examples, ExamplesDeleter>;
using PredictionsPtr = std::unique_ptr<sf_predictions, PredictionsDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Carries a failed call out to main() with its exit code.
struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(sf_status status) {
  switch (status) {
    case SF_OK: return 0;
    case SF_ERR_USAGE: return kExitUsage;
    case SF_ERR_REMOTE: return kExitRemote;
    default: return kExitData;
  }
}

void check(sf_status status, const std::string& context) {
  if (status != SF_OK) {
    throw Failure{exit_code_for(status), context + ": " + sf_last_error()};
  }
}

struct Options {
  std::string corpus;
  std::string examples;
  std::string predictions;
  std::string snapped;
  std::string endpoint;
  std::string question_bank;
  std::string out = ".";
  std::string compare;
  std::string label = "raw";
  std::string token;
  bool uncased = true;
  bool all_event_questions = false;
  std::vector<std::string> null_answers;
  std::optional<double> split;
  uint64_t seed = 0;
  size_t batch_size = 16;
  int retries = 3;
  unsigned timeout_ms = 30000;
  size_t max_in_flight = 1;
};

PolicyPtr make_policy(const Options& opts) {
  PolicyPtr policy(sf_policy_new());
  if (!policy) throw Failure{kExitData, "out of memory"};
  check(sf_policy_set_uncased(policy.get(), opts.uncased), "policy");
  if (!opts.null_answers.empty()) {
    check(sf_policy_clear_null_answers(policy.get()), "policy");
    for (const auto& n : opts.null_answers) {
      check(sf_policy_add_null_answer(policy.get(), n.c_str()), "policy");
    }
  }
  return policy;
}

CorpusPtr load_corpus(const Options& opts) {
  if (opts.corpus.empty()) throw Failure{kExitUsage, "--corpus is required"};
  const PolicyPtr policy = make_policy(opts);
  sf_corpus* raw = nullptr;
  check(sf_corpus_load(opts.corpus.c_str(), policy.get(), &raw), "corpus");
  CorpusPtr corpus(raw);

  char* report = nullptr;
  check(sf_corpus_validate(corpus.get(), &report), "validate");
  StringPtr owned(report);
  if (std::strcmp(report, "[]") != 0) {
    throw Failure{kExitData, std::string("corpus violations: ") + report};
  }
  return corpus;
}

PredictionsPtr load_predictions(const std::string& path) {
  sf_predictions* raw = nullptr;
  check(sf_predictions_load(path.c_str(), &raw), "predictions");
  return PredictionsPtr(raw);
}

ExamplesPtr build_examples(const Options& opts, const sf_corpus* corpus) {
  sf_examples* raw = nullptr;
  check(sf_examples_build(corpus,
                          opts.question_bank.empty() ? nullptr
                                                     : opts.question_bank.c_str(),
                          opts.all_event_questions, &raw),
        "examples");
  return ExamplesPtr(raw);
}

PredictionsPtr fetch(const Options& opts, const sf_examples* examples) {
  sf_fetch_config config;
  sf_fetch_config_init(&config);
  config.endpoint = opts.endpoint.empty() ? nullptr : opts.endpoint.c_str();
  config.batch_size = opts.batch_size;
  config.max_retries = opts.retries;
  config.timeout_ms = opts.timeout_ms;
  config.max_in_flight = opts.max_in_flight;
  config.bearer_token = opts.token.empty() ? nullptr : opts.token.c_str();
  sf_predictions* raw = nullptr;
  check(sf_predictions_fetch(&config, examples, &raw), "fetch");
  return PredictionsPtr(raw);
}

void run_prepare(const Options& opts) {
  const CorpusPtr corpus = load_corpus(opts);
  const ExamplesPtr examples = build_examples(opts, corpus.get());
  sf_length_profile profile{};
  check(sf_examples_profile(examples.get(), &profile), "profile");

  CorpusPtr train, validation;
  if (opts.split) {
    sf_corpus* t = nullptr;
    sf_corpus* v = nullptr;
    check(sf_corpus_split(corpus.get(), *opts.split, opts.seed, &t, &v), "split");
    train.reset(t);
    validation.reset(v);
  }

  const fs::path out(opts.out);
  const std::string examples_path =
      opts.examples.empty() ? (out / "examples.jsonl").string() : opts.examples;
  check(sf_examples_save(examples.get(), examples_path.c_str()), "write examples");
  if (train) {
    check(sf_corpus_save(train.get(), (out / "train.jsonl").string().c_str()),
          "write train split");
    check(sf_corpus_save(validation.get(),
                         (out / "validation.jsonl").string().c_str()),
          "write validation split");
  }

  std::cout << "tweets: " << sf_corpus_tweet_count(corpus.get()) << "\n"
            << "examples: " << sf_examples_count(examples.get()) << "\n"
            << "max_source_tokens: " << profile.max_source_tokens << "\n"
            << "max_target_tokens: " << profile.max_target_tokens << "\n";
  if (profile.sources_over_cap || profile.targets_over_cap) {
    std::cout << "over_cap: " << profile.sources_over_cap << " sources, "
              << profile.targets_over_cap << " targets\n";
  }
  if (train) {
    std::cout << "train: " << sf_corpus_tweet_count(train.get())
              << " tweets\nvalidation: " << sf_corpus_tweet_count(validation.get())
              << " tweets\n";
  }
}

void run_fetch(const Options& opts) {
  ExamplesPtr examples;
  if (!opts.examples.empty()) {
    sf_examples* raw = nullptr;
    check(sf_examples_load(opts.examples.c_str(), &raw), "examples");
    examples.reset(raw);
  } else {
    const CorpusPtr corpus = load_corpus(opts);
    examples = build_examples(opts, corpus.get());
  }
  const PredictionsPtr predictions = fetch(opts, examples.get());
  const std::string path = (fs::path(opts.out) / "predictions.jsonl").string();
  check(sf_predictions_save(predictions.get(), path.c_str()), "write predictions");
  std::cout << "predictions: " << sf_predictions_count(predictions.get()) << "\n";
}

void run_transform(const Options& opts) {
  const CorpusPtr corpus = load_corpus(opts);
  if (opts.predictions.empty()) throw Failure{kExitUsage, "--predictions is required"};
  const PredictionsPtr raw = load_predictions(opts.predictions);
  const std::string path = (fs::path(opts.out) / "snapped.jsonl").string();
  char* errors = nullptr;
  const sf_status status =
      sf_transform(raw.get(), corpus.get(), path.c_str(), nullptr, &errors);
  StringPtr owned(errors);
  if (status != SF_OK) {
    std::string message = std::string("transform: ") + sf_last_error();
    if (errors) message += std::string("\n") + errors;
    throw Failure{exit_code_for(status), message};
  }
  std::cout << "snapped: " << sf_predictions_count(raw.get()) << "\n";
}

void run_evaluate(const Options& opts) {
  if (opts.predictions.empty() == opts.endpoint.empty()) {
    throw Failure{kExitUsage, "evaluate needs exactly one of --predictions or --endpoint"};
  }
  bool compare = false;
  if (!opts.compare.empty()) {
    if (opts.compare != "raw,post") {
      throw Failure{kExitUsage, "--compare only accepts 'raw,post'"};
    }
    compare = true;
  }
  if (!opts.snapped.empty() && !compare) {
    throw Failure{kExitUsage, "--snapped requires --compare raw,post"};
  }
  const CorpusPtr corpus = load_corpus(opts);

  PredictionsPtr raw;
  if (!opts.predictions.empty()) {
    raw = load_predictions(opts.predictions);
  } else {
    const ExamplesPtr examples = build_examples(opts, corpus.get());
    raw = fetch(opts, examples.get());
    const std::string path = (fs::path(opts.out) / "predictions.jsonl").string();
    check(sf_predictions_save(raw.get(), path.c_str()), "write predictions");
  }

  PredictionsPtr snapped;
  if (compare) {
    if (!opts.snapped.empty()) {
      snapped = load_predictions(opts.snapped);
    } else {
      sf_predictions* s = nullptr;
      check(sf_transform(raw.get(), corpus.get(), nullptr, &s, nullptr), "transform");
      snapped.reset(s);
    }
  }

  char* summary = nullptr;
  check(sf_evaluate(corpus.get(), raw.get(), snapped.get(), opts.label.c_str(),
                    opts.out.c_str(), &summary),
        "evaluate");
  StringPtr owned(summary);
  std::cout << summary << "\n";
}

bool flag_on_command_line(int argc, char** argv, const std::string& flag) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == flag || arg.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

void add_policy_flags(CLI::App* cmd, Options& opts) {
  cmd->add_flag("--uncased,!--cased", opts.uncased,
                "Compare answers case-insensitively (default) or exactly");
  cmd->add_option("--null-answer", opts.null_answers,
                  "Predefined no-answer choice; repeatable (default: 'not specified')")
      ->take_all()
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
}

void add_fetch_flags(CLI::App* cmd, Options& opts) {
  cmd->add_option("--endpoint", opts.endpoint,
                  "Generation service base URL (or SLOTFORGE_GEN_ENDPOINT)");
  cmd->add_option("--batch-size", opts.batch_size, "Sources per request")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--retries", opts.retries, "Retries per batch")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--timeout-ms", opts.timeout_ms, "Per-request timeout");
  cmd->add_option("--max-in-flight", opts.max_in_flight, "Concurrent batches")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--token", opts.token, "Bearer token passed to the service");
  cmd->add_option("--question-bank", opts.question_bank,
                  "JSON object of event name to event question");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text-to-text slot filling pipeline with TransM snapping"};
  app.set_config("--config", "", "Read flags from a TOML/INI file");
  app.require_subcommand(1);
  Options opts;

  auto* prepare = app.add_subcommand("prepare", "Build the examples file");
  prepare->add_option("--corpus", opts.corpus, "Corpus file")->required();
  prepare->add_option("--examples", opts.examples,
                      "Examples output path (default <out>/examples.jsonl)");
  prepare->add_option("--question-bank", opts.question_bank,
                      "JSON object of event name to event question");
  prepare->add_flag("--all-event-questions", opts.all_event_questions,
                    "Ask all five event questions per tweet");
  prepare->add_option("--split", opts.split, "Validation fraction, e.g. 0.1")
      ->check(CLI::Range(0.0, 1.0));
  prepare->add_option("--seed", opts.seed, "Split seed");
  prepare->add_option("--out", opts.out, "Output directory");
  add_policy_flags(prepare, opts);

  auto* fetch_cmd = app.add_subcommand("fetch", "Request predictions from the service");
  fetch_cmd->add_option("--corpus", opts.corpus, "Corpus file");
  fetch_cmd->add_option("--examples", opts.examples, "Examples file");
  fetch_cmd->add_option("--out", opts.out, "Output directory");
  add_fetch_flags(fetch_cmd, opts);
  add_policy_flags(fetch_cmd, opts);

  auto* transform = app.add_subcommand("transform", "Snap predictions onto candidates");
  transform->add_option("--corpus", opts.corpus, "Corpus file")->required();
  transform->add_option("--predictions", opts.predictions, "Prediction file")
      ->required();
  transform->add_option("--out", opts.out, "Output directory");
  add_policy_flags(transform, opts);

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  evaluate->add_option("--corpus", opts.corpus, "Corpus file")->required();
  evaluate->add_option("--predictions", opts.predictions, "Prediction file");
  evaluate->add_option("--snapped", opts.snapped,
                       "Snapped predictions for --compare (default: run TransM)");
  evaluate->add_option("--compare", opts.compare, "Only 'raw,post'");
  evaluate->add_option("--label", opts.label, "Run label for single-run reports");
  evaluate->add_option("--out", opts.out, "Output directory");
  add_fetch_flags(evaluate, opts);
  add_policy_flags(evaluate, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  // Flags beat the environment, which beats the config file.
  if (!flag_on_command_line(argc, argv, "--endpoint") && opts.predictions.empty()) {
    if (const char* env = std::getenv("SLOTFORGE_GEN_ENDPOINT"); env && *env) {
      opts.endpoint = env;
    }
  }
  if (!evaluate->parsed() && !fetch_cmd->parsed()) opts.endpoint.clear();

  try {
    if (prepare->parsed()) run_prepare(opts);
    if (fetch_cmd->parsed()) {
      if (opts.corpus.empty() == opts.examples.empty()) {
        throw Failure{kExitUsage, "fetch needs exactly one of --corpus or --examples"};
      }
      run_fetch(opts);
    }
    if (transform->parsed()) run_transform(opts);
    if (evaluate->parsed()) run_evaluate(opts);
  } catch (const Failure& f) {
    std::cerr << "slotforge: " << f.message << "\n";
    return f.exit_code;
  }
  return 0;
}
