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

#include "corpus.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "error.h"
#include "io.h"

namespace slotforge {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 5> kEventNames = {
    "tested_positive", "tested_negative", "can_not_test", "death",
    "cure_and_prevention"};

CorpusStats compute_stats(const std::vector<Tweet>& tweets) {
  CorpusStats stats;
  for (const auto& t : tweets) {
    ++stats.tweets_per_event[event_index(t.event)];
    stats.slot_annotations += t.slots.size();
    stats.total_examples += 1 + t.slots.size();
  }
  return stats;
}

// Slot-level invariants shared by parsing (first failure throws) and
// validation (every failure is reported).
template <typename Report>
void check_slot(const SlotAnnotation& slot, const TextPolicy& policy,
                bool report_duplicates, Report&& report) {
  if (slot.name.empty()) report("slot name is empty");
  if (slot.question.empty()) report("slot question is empty");
  std::set<std::string> seen;
  for (const auto& c : slot.candidates) {
    if (c.empty()) {
      report("empty candidate string");
      continue;
    }
    if (c.find(kAnswerDelimiter) != std::string::npos) {
      report("candidate '" + c + "' contains the answer delimiter");
    }
    if (!seen.insert(policy.normalize(c)).second && report_duplicates) {
      report("duplicate candidate '" + c + "' after normalization");
    }
  }
  for (const auto& g : slot.gold) {
    if (std::find(slot.candidates.begin(), slot.candidates.end(), g) ==
        slot.candidates.end()) {
      report("gold answer '" + g + "' not in candidates");
    }
  }
  if (slot.gold.empty() && !null_choice(slot, policy)) {
    report("empty gold set but no null-answer candidate");
  }
}

std::string require_string(const json& record, const char* field,
                           const std::string& where) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_string()) {
    throw data_error(where + ": field '" + field + "' must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> require_strings(const json& record, const char* field,
                                         const std::string& where) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_array()) {
    throw data_error(where + ": field '" + field + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw data_error(where + ": field '" + field +
                       "' must contain only strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

// Drops normalized duplicates and maps gold onto the surviving candidates,
// returned in candidate order.
void dedup_slot(SlotAnnotation& slot, const TextPolicy& policy) {
  std::vector<std::string> kept;
  std::vector<std::string> kept_norm;
  for (const auto& c : slot.candidates) {
    std::string n = policy.normalize(c);
    if (std::find(kept_norm.begin(), kept_norm.end(), n) == kept_norm.end()) {
      kept.push_back(c);
      kept_norm.push_back(std::move(n));
    }
  }
  std::vector<bool> is_gold(kept.size(), false);
  for (const auto& g : slot.gold) {
    const std::string n = policy.normalize(g);
    auto pos = std::find(kept_norm.begin(), kept_norm.end(), n);
    is_gold[pos - kept_norm.begin()] = true;
  }
  slot.gold.clear();
  for (size_t i = 0; i < kept.size(); ++i) {
    if (is_gold[i]) slot.gold.push_back(kept[i]);
  }
  slot.candidates = std::move(kept);
}

Tweet parse_tweet(const json& record, size_t line_number,
                  const TextPolicy& policy) {
  const std::string where = "line " + std::to_string(line_number);
  Tweet tweet;
  tweet.id = require_string(record, "id", where);
  if (tweet.id.empty()) throw data_error(where + ": empty tweet id");
  tweet.text = require_string(record, "text", where);
  if (tweet.text.empty()) throw data_error(where + ": empty tweet text");
  const std::string event = require_string(record, "event", where);
  auto parsed = parse_event(event);
  if (!parsed) throw data_error(where + ": unknown event type '" + event + "'");
  tweet.event = *parsed;

  auto slots = record.find("slots");
  if (slots == record.end() || !slots->is_array()) {
    throw data_error(where + ": field 'slots' must be an array");
  }
  std::set<std::string> names;
  for (const auto& s : *slots) {
    if (!s.is_object()) throw data_error(where + ": slot is not an object");
    SlotAnnotation slot;
    slot.name = require_string(s, "name", where);
    slot.question = require_string(s, "question", where);
    slot.candidates = require_strings(s, "candidates", where);
    slot.gold = require_strings(s, "gold", where);
    const std::string slot_where = where + ", slot '" + slot.name + "'";
    // Normalized duplicates are legal on disk; they are merged below.
    check_slot(slot, policy, false, [&](const std::string& message) {
      throw data_error(slot_where + ": " + message);
    });
    if (!names.insert(slot.name).second) {
      throw data_error(slot_where + ": duplicate slot name");
    }
    dedup_slot(slot, policy);
    tweet.slots.push_back(std::move(slot));
  }
  return tweet;
}

// Uniform integer in [0, bound) from raw mt19937_64 output; the standard
// distributions are implementation-defined, this is not.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::mt19937_64::max() - (std::mt19937_64::max() % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::string_view event_name(EventType event) {
  return kEventNames[event_index(event)];
}

std::optional<EventType> parse_event(std::string_view name) {
  for (size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == name) return kAllEvents[i];
  }
  return std::nullopt;
}

Corpus::Corpus(std::vector<Tweet> tweets, TextPolicy policy)
    : tweets_(std::move(tweets)),
      policy_(std::move(policy)),
      stats_(compute_stats(tweets_)) {
  for (size_t i = 0; i < tweets_.size(); ++i) by_id_.emplace(tweets_[i].id, i);
}

const Tweet* Corpus::find_tweet(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &tweets_[it->second];
}

const SlotAnnotation* Corpus::find_slot(std::string_view tweet_id,
                                        std::string_view slot_name) const {
  const Tweet* tweet = find_tweet(tweet_id);
  if (tweet == nullptr) return nullptr;
  for (const auto& s : tweet->slots) {
    if (s.name == slot_name) return &s;
  }
  return nullptr;
}

std::optional<std::string> null_choice(const SlotAnnotation& slot,
                                       const TextPolicy& policy) {
  for (const auto& c : slot.candidates) {
    if (policy.is_null_answer(c)) return c;
  }
  return std::nullopt;
}

Corpus parse_corpus(std::istream& in, const TextPolicy& policy) {
  std::vector<Tweet> tweets;
  std::unordered_map<std::string, size_t> first_line;
  for_each_record_line(in, [&](size_t line_number, const std::string& line) {
    Tweet tweet = parse_tweet(parse_record(line_number, line), line_number,
                              policy);
    auto [it, inserted] = first_line.emplace(tweet.id, line_number);
    if (!inserted) {
      throw data_error("line " + std::to_string(line_number) +
                       ": duplicate tweet id '" + tweet.id +
                       "' (first seen on line " + std::to_string(it->second) +
                       ")");
    }
    tweets.push_back(std::move(tweet));
  });
  return Corpus(std::move(tweets), policy);
}

Corpus load_corpus(const std::filesystem::path& path,
                   const TextPolicy& policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open corpus " + path.string());
  return parse_corpus(in, policy);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& t : corpus.tweets()) {
    json slots = json::array();
    for (const auto& s : t.slots) {
      slots.push_back({{"name", s.name},
                       {"question", s.question},
                       {"candidates", s.candidates},
                       {"gold", s.gold}});
    }
    json record = {{"id", t.id},
                   {"text", t.text},
                   {"event", event_name(t.event)},
                   {"slots", std::move(slots)}};
    out << dump_record(record) << '\n';
  }
}

std::string serialize_corpus(const Corpus& corpus) {
  std::ostringstream out;
  write_corpus(corpus, out);
  return out.str();
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  atomic_write(path, serialize_corpus(corpus));
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  std::set<std::string> ids;
  for (const auto& t : corpus.tweets()) {
    auto add = [&](std::string slot, std::string message) {
      report.push_back({t.id, std::move(slot), std::move(message)});
    };
    if (t.id.empty()) add("", "empty tweet id");
    if (!ids.insert(t.id).second) add("", "duplicate tweet id");
    if (t.text.empty()) add("", "empty tweet text");
    std::set<std::string> names;
    for (const auto& s : t.slots) {
      if (!names.insert(s.name).second) add(s.name, "duplicate slot name");
      check_slot(s, corpus.policy(), true,
                 [&](const std::string& message) { add(s.name, message); });
    }
  }
  return report;
}

CorpusSplit split_train_validation(const Corpus& corpus, double ratio,
                                   std::uint64_t seed) {
  if (corpus.empty()) throw usage_error("cannot split an empty corpus");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw usage_error("split ratio must lie strictly between 0 and 1");
  }
  const size_t n = corpus.size();
  const auto k = static_cast<size_t>(std::llround(ratio * static_cast<double>(n)));

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + bounded(rng, n - i);
    std::swap(order[i], order[j]);
  }
  std::vector<bool> in_validation(n, false);
  for (size_t i = 0; i < k; ++i) in_validation[order[i]] = true;

  std::vector<Tweet> train;
  std::vector<Tweet> validation;
  for (size_t i = 0; i < n; ++i) {
    (in_validation[i] ? validation : train).push_back(corpus.tweets()[i]);
  }
  return {Corpus(std::move(train), corpus.policy()),
          Corpus(std::move(validation), corpus.policy())};
}

}  // namespace slotforge
