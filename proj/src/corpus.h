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

// Annotated tweet corpus: data model, line-delimited ingestion, validation
// and the seeded train/validation split.

#ifndef SLOTFORGE_SRC_CORPUS_H_
#define SLOTFORGE_SRC_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "text.h"

namespace slotforge {

enum class EventType {
  kTestedPositive,
  kTestedNegative,
  kCanNotTest,
  kDeath,
  kCureAndPrevention,
};

inline constexpr std::array<EventType, 5> kAllEvents = {
    EventType::kTestedPositive, EventType::kTestedNegative,
    EventType::kCanNotTest, EventType::kDeath, EventType::kCureAndPrevention};

inline size_t event_index(EventType e) { return static_cast<size_t>(e); }

// Wire names: tested_positive, tested_negative, can_not_test, death,
// cure_and_prevention.
std::string_view event_name(EventType event);
std::optional<EventType> parse_event(std::string_view name);

struct SlotAnnotation {
  std::string name;
  std::string question;
  std::vector<std::string> candidates;
  // Each entry is one of `candidates`, kept in candidate order.
  std::vector<std::string> gold;

  bool operator==(const SlotAnnotation&) const = default;
};

struct Tweet {
  std::string id;
  std::string text;
  EventType event = EventType::kTestedPositive;
  std::vector<SlotAnnotation> slots;

  bool operator==(const Tweet&) const = default;
};

struct CorpusStats {
  std::array<size_t, 5> tweets_per_event{};
  size_t slot_annotations = 0;
  // One event example plus one example per slot, for every tweet.
  size_t total_examples = 0;

  bool operator==(const CorpusStats&) const = default;
};

// Immutable once built. Construction computes stats but does not validate;
// parse_corpus() is the validating entry point.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Tweet> tweets, TextPolicy policy = {});

  const std::vector<Tweet>& tweets() const { return tweets_; }
  const CorpusStats& stats() const { return stats_; }
  const TextPolicy& policy() const { return policy_; }
  size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }

  const Tweet* find_tweet(std::string_view id) const;
  const SlotAnnotation* find_slot(std::string_view tweet_id,
                                  std::string_view slot_name) const;

  bool operator==(const Corpus& other) const {
    return tweets_ == other.tweets_ && policy_ == other.policy_;
  }

 private:
  std::vector<Tweet> tweets_;
  TextPolicy policy_;
  CorpusStats stats_;
  std::unordered_map<std::string, size_t> by_id_;
};

// First candidate the policy marks as a no-answer choice.
std::optional<std::string> null_choice(const SlotAnnotation& slot,
                                       const TextPolicy& policy);

// Throws a data error naming the offending line. Candidates are deduplicated
// after normalization (first occurrence wins) and gold answers are remapped
// onto the surviving candidate.
Corpus parse_corpus(std::istream& in, const TextPolicy& policy = {});
Corpus load_corpus(const std::filesystem::path& path,
                   const TextPolicy& policy = {});

void write_corpus(const Corpus& corpus, std::ostream& out);
std::string serialize_corpus(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct Violation {
  std::string tweet_id;
  std::string slot_name;  // empty for tweet-level violations
  std::string message;

  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

// Lists every invariant violation; an empty report means the corpus is valid.
ValidationReport validate_corpus(const Corpus& corpus);

struct CorpusSplit {
  Corpus train;
  Corpus validation;
};

// Samples round(ratio * N) tweets without replacement for validation using
// a seeded mt19937_64. Both halves keep the input order.
CorpusSplit split_train_validation(const Corpus& corpus, double ratio,
                                   std::uint64_t seed);

}  // namespace slotforge

#endif  // SLOTFORGE_SRC_CORPUS_H_
