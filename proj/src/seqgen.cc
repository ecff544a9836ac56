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

#include "seqgen.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "error.h"
#include "io.h"

namespace slotforge {
namespace {

using nlohmann::json;

constexpr std::string_view kContextPrefix = "context: ";
constexpr std::string_view kQuestionDelimiter = " question: ";
constexpr std::string_view kChoicesDelimiter = " choices: ";

std::string_view kind_name(ExampleKind kind) {
  return kind == ExampleKind::kEvent ? "event" : "slot";
}

}  // namespace

std::string render_source(std::string_view context, std::string_view question,
                          const std::vector<std::string>& choices) {
  if (context.empty()) throw data_error("source context is empty");
  if (question.empty()) throw data_error("source question is empty");
  for (const auto& c : choices) {
    if (c.empty()) throw data_error("empty choice in source");
  }

  std::string out;
  out.reserve(context.size() + question.size() + 64);
  out += kContextPrefix;
  out += context;
  out += kQuestionDelimiter;
  out += question;
  out += kChoicesDelimiter;
  out += join(choices, kAnswerDelimiter);

  auto parsed = parse_source(out);
  if (!parsed || parsed->context != context || parsed->question != question ||
      parsed->choices != choices) {
    throw data_error("question or choices contain delimiter text: '" +
                     std::string(question) + "'");
  }
  return out;
}

std::optional<SourceFields> parse_source(std::string_view source) {
  if (source.substr(0, kContextPrefix.size()) != kContextPrefix) {
    return std::nullopt;
  }
  const size_t choices_at = source.rfind(kChoicesDelimiter);
  if (choices_at == std::string_view::npos) return std::nullopt;
  const size_t question_at =
      source.substr(0, choices_at).rfind(kQuestionDelimiter);
  if (question_at == std::string_view::npos ||
      question_at < kContextPrefix.size()) {
    return std::nullopt;
  }
  SourceFields fields;
  fields.context = std::string(source.substr(
      kContextPrefix.size(), question_at - kContextPrefix.size()));
  const size_t question_begin = question_at + kQuestionDelimiter.size();
  fields.question =
      std::string(source.substr(question_begin, choices_at - question_begin));
  fields.choices =
      split_answers(source.substr(choices_at + kChoicesDelimiter.size()));
  return fields;
}

QuestionBank QuestionBank::defaults() {
  QuestionBank bank;
  bank.set(EventType::kTestedPositive,
           "Does this tweet report someone tested positive for coronavirus?");
  bank.set(EventType::kTestedNegative,
           "Does this tweet report someone tested negative for coronavirus?");
  bank.set(EventType::kCanNotTest,
           "Does this tweet report someone who can not get tested for "
           "coronavirus?");
  bank.set(EventType::kDeath, "Does this tweet report death from coronavirus?");
  bank.set(EventType::kCureAndPrevention,
           "Does this tweet report a cure or prevention for coronavirus?");
  return bank;
}

QuestionBank QuestionBank::from_json(const json& object, bool overlay) {
  if (!object.is_object()) {
    throw usage_error("question bank must be a JSON object");
  }
  QuestionBank bank = overlay ? defaults() : QuestionBank();
  for (const auto& [name, value] : object.items()) {
    auto event = parse_event(name);
    if (!event) throw usage_error("question bank: unknown event '" + name + "'");
    if (!value.is_string() || value.get<std::string>().empty()) {
      throw usage_error("question bank: question for '" + name +
                        "' must be a non-empty string");
    }
    bank.set(*event, value.get<std::string>());
  }
  if (!bank.covers_all()) {
    throw usage_error("question bank does not cover all five events");
  }
  return bank;
}

QuestionBank QuestionBank::load(const std::filesystem::path& path,
                                bool overlay) {
  try {
    return from_json(json::parse(read_file(path)), overlay);
  } catch (const json::parse_error& e) {
    throw usage_error("question bank " + path.string() + ": " + e.what());
  }
}

void QuestionBank::set(EventType event, std::string question) {
  questions_[event_index(event)] = std::move(question);
}

const std::string& QuestionBank::question(EventType event) const {
  const auto& q = questions_[event_index(event)];
  if (!q) {
    throw usage_error("no question for event '" +
                      std::string(event_name(event)) + "'");
  }
  return *q;
}

bool QuestionBank::covers_all() const {
  return std::all_of(questions_.begin(), questions_.end(),
                     [](const auto& q) { return q.has_value(); });
}

Example build_event_example(const Tweet& tweet, const QuestionBank& bank,
                            EventType asked) {
  Example ex;
  ex.key = {tweet.id, ExampleKind::kEvent, std::nullopt};
  ex.candidates = {"yes", "no"};
  ex.source = render_source(tweet.text, bank.question(asked), ex.candidates);
  ex.target = asked == tweet.event ? "yes" : "no";
  return ex;
}

Example build_slot_example(const Tweet& tweet, const SlotAnnotation& slot,
                           const TextPolicy& policy) {
  Example ex;
  ex.key = {tweet.id, ExampleKind::kSlot, slot.name};
  ex.candidates = slot.candidates;
  try {
    ex.source = render_source(tweet.text, slot.question, slot.candidates);
  } catch (const Error& e) {
    throw data_error("tweet '" + tweet.id + "', slot '" + slot.name +
                     "': " + e.what());
  }
  std::vector<std::string> answers;
  for (const auto& c : slot.candidates) {
    if (std::find(slot.gold.begin(), slot.gold.end(), c) != slot.gold.end()) {
      answers.push_back(c);
    }
  }
  if (answers.empty()) {
    auto none = null_choice(slot, policy);
    if (!none) {
      throw data_error("tweet '" + tweet.id + "', slot '" + slot.name +
                       "': empty gold and no null-answer candidate");
    }
    answers.push_back(*none);
  }
  ex.target = join(answers, kAnswerDelimiter);
  return ex;
}

std::vector<Example> build_all(const Corpus& corpus, const QuestionBank& bank,
                               const BuildOptions& options) {
  std::vector<Example> out;
  out.reserve(corpus.stats().total_examples);
  for (const auto& tweet : corpus.tweets()) {
    if (options.all_event_questions) {
      for (EventType asked : kAllEvents) {
        Example ex = build_event_example(tweet, bank, asked);
        ex.key.slot_name = std::string(event_name(asked));
        out.push_back(std::move(ex));
      }
    } else {
      out.push_back(build_event_example(tweet, bank));
    }
    for (const auto& slot : tweet.slots) {
      out.push_back(build_slot_example(tweet, slot, corpus.policy()));
    }
  }
  return out;
}

void LengthProfile::merge(const LengthProfile& other) {
  max_source_tokens = std::max(max_source_tokens, other.max_source_tokens);
  max_target_tokens = std::max(max_target_tokens, other.max_target_tokens);
  sources_over_cap += other.sources_over_cap;
  targets_over_cap += other.targets_over_cap;
}

size_t proxy_token_count(std::string_view text) {
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  size_t count = 0;
  bool in_token = false;
  for (char c : text) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

LengthProfile profile_lengths(std::span<const Example> examples) {
  LengthProfile profile;
  for (const auto& ex : examples) {
    const size_t source = proxy_token_count(ex.source);
    const size_t target = proxy_token_count(ex.target);
    profile.max_source_tokens = std::max(profile.max_source_tokens, source);
    profile.max_target_tokens = std::max(profile.max_target_tokens, target);
    if (source > kMaxSourceTokens) ++profile.sources_over_cap;
    if (target > kMaxTargetTokens) ++profile.targets_over_cap;
  }
  return profile;
}

json example_to_json(const Example& example) {
  json key = {{"tweet_id", example.key.tweet_id},
              {"kind", kind_name(example.key.kind)},
              {"slot_name", nullptr}};
  if (example.key.slot_name) key["slot_name"] = *example.key.slot_name;
  return {{"key", std::move(key)},
          {"source", example.source},
          {"target", example.target},
          {"candidates", example.candidates}};
}

Example example_from_json(const json& record, size_t line_number) {
  const std::string where = "line " + std::to_string(line_number);
  try {
    Example ex;
    const json& key = record.at("key");
    ex.key.tweet_id = key.at("tweet_id").get<std::string>();
    const std::string kind = key.at("kind").get<std::string>();
    if (kind == "event") {
      ex.key.kind = ExampleKind::kEvent;
    } else if (kind == "slot") {
      ex.key.kind = ExampleKind::kSlot;
    } else {
      throw data_error(where + ": unknown example kind '" + kind + "'");
    }
    const json& slot = key.at("slot_name");
    if (!slot.is_null()) ex.key.slot_name = slot.get<std::string>();
    if (ex.key.kind == ExampleKind::kSlot && !ex.key.slot_name) {
      throw data_error(where + ": slot example without slot_name");
    }
    ex.source = record.at("source").get<std::string>();
    ex.target = record.at("target").get<std::string>();
    ex.candidates = record.at("candidates").get<std::vector<std::string>>();
    return ex;
  } catch (const json::exception& e) {
    throw data_error(where + ": malformed example record (" + e.what() + ")");
  }
}

void write_examples(std::span<const Example> examples, std::ostream& out) {
  for (const auto& ex : examples) out << dump_record(example_to_json(ex)) << '\n';
}

void save_examples(std::span<const Example> examples,
                   const std::filesystem::path& path) {
  std::ostringstream out;
  write_examples(examples, out);
  atomic_write(path, out.str());
}

std::vector<Example> parse_examples(std::istream& in) {
  std::vector<Example> out;
  for_each_record_line(in, [&](size_t line_number, const std::string& line) {
    out.push_back(example_from_json(parse_record(line_number, line), line_number));
  });
  return out;
}

std::vector<Example> load_examples(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open examples " + path.string());
  return parse_examples(in);
}

}  // namespace slotforge
