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

// Text-to-text sequence construction. A source sequence looks like
//
//   context: <tweet text> question: <question> choices: <c1> ||| <c2>
//
// and the target is the answer the model should generate.

#ifndef SLOTFORGE_SRC_SEQGEN_H_
#define SLOTFORGE_SRC_SEQGEN_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.h"
#include "json.hpp"

namespace slotforge {

enum class ExampleKind { kEvent, kSlot };

struct ExampleKey {
  std::string tweet_id;
  ExampleKind kind = ExampleKind::kSlot;
  // Slot name for slot examples. Event examples leave it empty, except in
  // all-questions mode where it holds the wire name of the event asked about.
  std::optional<std::string> slot_name;

  bool operator==(const ExampleKey&) const = default;
};

struct Example {
  ExampleKey key;
  std::string source;
  std::string target;
  std::vector<std::string> candidates;

  bool operator==(const Example&) const = default;
};

struct SourceFields {
  std::string context;
  std::string question;
  std::vector<std::string> choices;

  bool operator==(const SourceFields&) const = default;
};

// Throws a data error when context or question is empty, or when a field
// carries delimiter text that would make the result ambiguous to
// parse_source(). The context may contain anything.
std::string render_source(std::string_view context, std::string_view question,
                          const std::vector<std::string>& choices);

// Inverse of render_source(). The choices field is found at the last
// " choices: " and the question at the last " question: " before it.
std::optional<SourceFields> parse_source(std::string_view source);

class QuestionBank {
 public:
  QuestionBank() = default;

  // DEATH uses "Does this tweet report death from coronavirus?"; the other
  // four wordings are placeholders meant to be overridden.
  static QuestionBank defaults();

  // Reads {"death": "...", ...}. With `overlay`, entries replace the
  // defaults; otherwise the file must cover all five events.
  static QuestionBank from_json(const nlohmann::json& object, bool overlay = true);
  static QuestionBank load(const std::filesystem::path& path, bool overlay = true);

  void set(EventType event, std::string question);
  // Throws a usage error when the event has no question.
  const std::string& question(EventType event) const;
  bool covers_all() const;

 private:
  std::array<std::optional<std::string>, 5> questions_;
};

struct BuildOptions {
  // Ask all five event questions per tweet instead of only its own event.
  bool all_event_questions = false;
};

Example build_event_example(const Tweet& tweet, const QuestionBank& bank,
                            EventType asked);
inline Example build_event_example(const Tweet& tweet, const QuestionBank& bank) {
  return build_event_example(tweet, bank, tweet.event);
}

// Target is the gold answers joined by " ||| " in candidate order, or the
// slot's null-answer choice when gold is empty.
Example build_slot_example(const Tweet& tweet, const SlotAnnotation& slot,
                           const TextPolicy& policy = {});

// Corpus order; each tweet's event example(s) precede its slot examples.
std::vector<Example> build_all(const Corpus& corpus, const QuestionBank& bank,
                               const BuildOptions& options = {});

// Model-side length caps observed in the original setup, in subword tokens.
inline constexpr size_t kMaxSourceTokens = 473;
inline constexpr size_t kMaxTargetTokens = 78;

struct LengthProfile {
  size_t max_source_tokens = 0;
  size_t max_target_tokens = 0;
  // Examples whose proxy count exceeds the caps. Nothing is truncated.
  size_t sources_over_cap = 0;
  size_t targets_over_cap = 0;

  void merge(const LengthProfile& other);
  bool operator==(const LengthProfile&) const = default;
};

// Whitespace-delimited token count, a stand-in for the model tokenizer.
size_t proxy_token_count(std::string_view text);

LengthProfile profile_lengths(std::span<const Example> examples);

nlohmann::json example_to_json(const Example& example);
Example example_from_json(const nlohmann::json& record, size_t line_number);

void write_examples(std::span<const Example> examples, std::ostream& out);
void save_examples(std::span<const Example> examples,
                   const std::filesystem::path& path);
std::vector<Example> parse_examples(std::istream& in);
std::vector<Example> load_examples(const std::filesystem::path& path);

}  // namespace slotforge

#endif  // SLOTFORGE_SRC_SEQGEN_H_
