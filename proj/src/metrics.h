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

// Exact-match scoring: per-slot TP/FP/FN, micro aggregation within an event,
// unweighted macro average across the five events, and the raw-vs-snapped
// underestimation comparison.

#ifndef SLOTFORGE_SRC_METRICS_H_
#define SLOTFORGE_SRC_METRICS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.h"
#include "json.hpp"
#include "prediction.h"
#include "rational.h"

namespace slotforge {

struct MatchCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& other) {
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    return *this;
  }
  friend MatchCounts operator+(MatchCounts a, const MatchCounts& b) {
    return a += b;
  }
  bool operator==(const MatchCounts&) const = default;
};

// Predicted answers are the distinct normalized " ||| " pieces of
// `predicted`. Matched non-null answers are TPs, unmatched non-null answers
// FPs, unmatched non-null gold answers FNs. Null answers on either side count
// for nothing.
MatchCounts score_slot(std::string_view predicted,
                       const std::vector<std::string>& gold,
                       const TextPolicy& policy = {});

struct EventScore {
  EventType event = EventType::kTestedPositive;
  MatchCounts counts;
  Rational precision;
  Rational recall;
  Rational f1;

  bool operator==(const EventScore&) const = default;
};

// P, R and F1 from counts, each 0 when its denominator is 0.
EventScore score_counts(EventType event, const MatchCounts& counts);
// Sums slot counts, then scores.
EventScore score_event(EventType event, std::span<const MatchCounts> slot_counts);

struct MacroScore {
  Rational precision;
  Rational recall;
  Rational f1;

  bool operator==(const MacroScore&) const = default;
};

struct EvaluationReport {
  std::string run_label;
  std::array<EventScore, 5> per_event;  // indexed by event_index()
  MacroScore macro;

  MatchCounts total() const;
};

// Requires exactly one score per event; throws a usage error otherwise.
EvaluationReport macro_report(std::span<const EventScore> per_event,
                              std::string run_label = "run");

// Scores every slot in the corpus. Slots absent from `predictions` count as
// empty predictions, so each non-null gold answer becomes an FN. Throws a
// data error for prediction keys the corpus does not know.
EvaluationReport evaluate_run(const Corpus& corpus,
                              const std::map<PredictionKey, std::string>& predictions,
                              std::string run_label);

struct UnmatchedPrediction {
  PredictionKey key;
  std::string raw;
  std::optional<std::string> snapped;
  std::vector<std::string> gold;

  bool operator==(const UnmatchedPrediction&) const = default;
};

// True when some answer in `predicted` (or the absence of any answer) does
// not exactly match the slot's target answers.
bool is_unmatched(std::string_view predicted, const SlotAnnotation& slot,
                  const TextPolicy& policy);

// Unmatched predictions of a single run, in key order.
std::vector<UnmatchedPrediction> unmatched_predictions(
    const Corpus& corpus, const std::map<PredictionKey, std::string>& predictions);

struct CountDelta {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  bool operator==(const CountDelta&) const = default;
};

struct UnderestimationReport {
  EvaluationReport raw;
  EvaluationReport post;
  CountDelta count_delta;  // post - raw, summed over events
  MacroScore macro_delta;  // post - raw
  std::vector<UnmatchedPrediction> unmatched;
};

// Both runs must cover the same keys. `unmatched` lists the predictions whose
// snapped form still misses the gold answers.
UnderestimationReport underestimation(
    const Corpus& corpus, const std::map<PredictionKey, std::string>& raw,
    const std::map<PredictionKey, std::string>& snapped);

// Report files. Ratios render as 4-decimal strings next to exact fractions.
nlohmann::json report_to_json(const EvaluationReport& report);
nlohmann::json underestimation_to_json(const UnderestimationReport& report);
nlohmann::json unmatched_to_json(const UnmatchedPrediction& unmatched);

}  // namespace slotforge

#endif  // SLOTFORGE_SRC_METRICS_H_
