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

#include "metrics.h"

#include <algorithm>
#include <set>

#include "error.h"

namespace slotforge {
namespace {

using nlohmann::json;

std::set<std::string> non_null_answers(const std::vector<std::string>& answers,
                                       const TextPolicy& policy) {
  std::set<std::string> out;
  for (const auto& a : answers) {
    if (!policy.is_null_answer(a)) out.insert(policy.normalize(a));
  }
  return out;
}

json ratio_json(const Rational& value) {
  return {{"value", format_fixed(value)}, {"exact", format_exact(value)}};
}

json macro_json(const MacroScore& m) {
  return {{"precision", format_fixed(m.precision)},
          {"recall", format_fixed(m.recall)},
          {"f1", format_fixed(m.f1)},
          {"exact",
           {{"precision", format_exact(m.precision)},
            {"recall", format_exact(m.recall)},
            {"f1", format_exact(m.f1)}}}};
}

}  // namespace

MatchCounts score_slot(std::string_view predicted,
                       const std::vector<std::string>& gold,
                       const TextPolicy& policy) {
  const auto predicted_set = non_null_answers(split_answers(predicted), policy);
  const auto gold_set = non_null_answers(gold, policy);
  MatchCounts counts;
  for (const auto& p : predicted_set) {
    if (gold_set.count(p)) {
      ++counts.tp;
    } else {
      ++counts.fp;
    }
  }
  for (const auto& g : gold_set) {
    if (!predicted_set.count(g)) ++counts.fn;
  }
  return counts;
}

EventScore score_counts(EventType event, const MatchCounts& counts) {
  EventScore score;
  score.event = event;
  score.counts = counts;
  score.precision = ratio_or_zero(counts.tp, counts.tp + counts.fp);
  score.recall = ratio_or_zero(counts.tp, counts.tp + counts.fn);
  const Rational sum = score.precision + score.recall;
  score.f1 = sum.numerator() == 0 ? Rational(0)
                      : Rational(2) * score.precision * score.recall / sum;
  return score;
}

EventScore score_event(EventType event, std::span<const MatchCounts> slot_counts) {
  MatchCounts total;
  for (const auto& c : slot_counts) total += c;
  return score_counts(event, total);
}

MatchCounts EvaluationReport::total() const {
  MatchCounts total;
  for (const auto& e : per_event) total += e.counts;
  return total;
}

EvaluationReport macro_report(std::span<const EventScore> per_event,
                              std::string run_label) {
  EvaluationReport report;
  report.run_label = std::move(run_label);
  std::array<bool, 5> seen{};
  for (const auto& score : per_event) {
    const size_t i = event_index(score.event);
    if (seen[i]) {
      throw usage_error("duplicate score for event '" +
                        std::string(event_name(score.event)) + "'");
    }
    seen[i] = true;
    report.per_event[i] = score;
  }
  for (EventType e : kAllEvents) {
    if (!seen[event_index(e)]) {
      throw usage_error("missing score for event '" +
                        std::string(event_name(e)) + "'");
    }
  }
  Rational p, r, f;
  for (const auto& score : report.per_event) {
    p += score.precision;
    r += score.recall;
    f += score.f1;
  }
  const auto n = static_cast<std::int64_t>(report.per_event.size());
  report.macro = {p / n, r / n, f / n};
  return report;
}

EvaluationReport evaluate_run(
    const Corpus& corpus, const std::map<PredictionKey, std::string>& predictions,
    std::string run_label) {
  for (const auto& [key, text] : predictions) {
    if (corpus.find_slot(key.tweet_id, key.slot) == nullptr) {
      throw data_error("prediction for unknown slot " + describe(key));
    }
  }
  std::array<MatchCounts, 5> counts{};
  for (const auto& tweet : corpus.tweets()) {
    for (const auto& slot : tweet.slots) {
      auto it = predictions.find({tweet.id, slot.name});
      const std::string_view text =
          it == predictions.end() ? std::string_view() : it->second;
      counts[event_index(tweet.event)] += score_slot(text, slot.gold, corpus.policy());
    }
  }
  std::vector<EventScore> scores;
  for (EventType e : kAllEvents) scores.push_back(score_counts(e, counts[event_index(e)]));
  return macro_report(scores, std::move(run_label));
}

bool is_unmatched(std::string_view predicted, const SlotAnnotation& slot,
                  const TextPolicy& policy) {
  std::set<std::string> target;
  for (const auto& g : slot.gold) target.insert(policy.normalize(g));
  if (target.empty()) {
    if (auto none = null_choice(slot, policy)) target.insert(policy.normalize(*none));
  }
  const auto answers = split_answers(predicted);
  if (answers.empty()) return true;
  return std::any_of(answers.begin(), answers.end(), [&](const std::string& a) {
    return !target.count(policy.normalize(a));
  });
}

std::vector<UnmatchedPrediction> unmatched_predictions(
    const Corpus& corpus, const std::map<PredictionKey, std::string>& predictions) {
  std::vector<UnmatchedPrediction> out;
  for (const auto& [key, text] : predictions) {
    const SlotAnnotation* slot = corpus.find_slot(key.tweet_id, key.slot);
    if (slot == nullptr) {
      throw data_error("prediction for unknown slot " + describe(key));
    }
    if (is_unmatched(text, *slot, corpus.policy())) {
      out.push_back({key, text, std::nullopt, slot->gold});
    }
  }
  return out;
}

UnderestimationReport underestimation(
    const Corpus& corpus, const std::map<PredictionKey, std::string>& raw,
    const std::map<PredictionKey, std::string>& snapped) {
  if (raw.size() != snapped.size() ||
      !std::equal(raw.begin(), raw.end(), snapped.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw data_error("raw and snapped predictions cover different keys");
  }
  UnderestimationReport report;
  report.raw = evaluate_run(corpus, raw, "raw");
  report.post = evaluate_run(corpus, snapped, "post");
  const MatchCounts before = report.raw.total();
  const MatchCounts after = report.post.total();
  report.count_delta = {after.tp - before.tp, after.fp - before.fp,
                        after.fn - before.fn};
  report.macro_delta = {report.post.macro.precision - report.raw.macro.precision,
                        report.post.macro.recall - report.raw.macro.recall,
                        report.post.macro.f1 - report.raw.macro.f1};
  auto raw_it = raw.begin();
  for (const auto& [key, text] : snapped) {
    const SlotAnnotation* slot = corpus.find_slot(key.tweet_id, key.slot);
    if (is_unmatched(text, *slot, corpus.policy())) {
      report.unmatched.push_back({key, raw_it->second, text, slot->gold});
    }
    ++raw_it;
  }
  return report;
}

json report_to_json(const EvaluationReport& report) {
  json per_event = json::array();
  for (const auto& e : report.per_event) {
    per_event.push_back({{"event", event_name(e.event)},
                         {"tp", e.counts.tp},
                         {"fp", e.counts.fp},
                         {"fn", e.counts.fn},
                         {"precision", ratio_json(e.precision)},
                         {"recall", ratio_json(e.recall)},
                         {"f1", ratio_json(e.f1)}});
  }
  const MatchCounts total = report.total();
  return {{"run_label", report.run_label},
          {"per_event", std::move(per_event)},
          {"totals", {{"tp", total.tp}, {"fp", total.fp}, {"fn", total.fn}}},
          {"macro", macro_json(report.macro)}};
}

json underestimation_to_json(const UnderestimationReport& report) {
  return {{"raw", report_to_json(report.raw)},
          {"post", report_to_json(report.post)},
          {"delta",
           {{"tp", report.count_delta.tp},
            {"fp", report.count_delta.fp},
            {"fn", report.count_delta.fn},
            {"precision", format_signed(report.macro_delta.precision)},
            {"recall", format_signed(report.macro_delta.recall)},
            {"f1", format_signed(report.macro_delta.f1)}}},
          {"unmatched_count", report.unmatched.size()}};
}

json unmatched_to_json(const UnmatchedPrediction& u) {
  json record = {{"tweet_id", u.key.tweet_id},
                 {"slot", u.key.slot},
                 {"raw", u.raw},
                 {"snapped", nullptr},
                 {"gold", u.gold}};
  if (u.snapped) record["snapped"] = *u.snapped;
  return record;
}

}  // namespace slotforge
