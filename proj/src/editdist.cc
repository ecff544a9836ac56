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

#include "editdist.h"

#include <algorithm>
#include <numeric>

#include "error.h"

namespace slotforge {

size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Single row over the shorter string.
  std::vector<size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), size_t{0});
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diagonal = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t above = row[j];
      const size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[b.size()];
}

size_t levenshtein_utf8(std::string_view a, std::string_view b) {
  return levenshtein(to_scalars(a), to_scalars(b));
}

Rational normalized_distance(std::string_view prediction,
                             std::string_view candidate, bool uncased) {
  const std::u32string c = to_scalars(normalize(candidate, uncased));
  if (c.empty()) throw usage_error("normalized distance to an empty candidate");
  const std::u32string p = to_scalars(normalize(prediction, uncased));
  return Rational(static_cast<std::int64_t>(levenshtein(p, c)),
                  static_cast<std::int64_t>(c.size()));
}

SnapResult transm(std::string_view prediction,
                  const std::vector<std::string>& candidates, bool uncased) {
  if (candidates.empty()) throw usage_error("TransM needs at least one candidate");
  const std::u32string p = to_scalars(normalize(prediction, uncased));
  SnapResult best;
  bool have_best = false;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const std::u32string c = to_scalars(normalize(candidates[i], uncased));
    if (c.empty()) throw usage_error("TransM candidate is empty");
    const size_t distance = levenshtein(p, c);
    const Rational score(static_cast<std::int64_t>(distance),
                         static_cast<std::int64_t>(c.size()));
    // Strict comparisons keep the earliest index on full ties.
    if (!have_best || score < best.normalized_distance ||
        (score == best.normalized_distance && distance < best.distance)) {
      best = {candidates[i], i, distance, score, distance == 0};
      have_best = true;
    }
  }
  return best;
}

SnappedPrediction snap_prediction(const RawPrediction& prediction,
                                  const SlotAnnotation& slot, bool uncased) {
  SnappedPrediction out;
  out.key = prediction.key;
  out.raw = prediction.text;
  std::vector<size_t> chosen;
  for (const auto& answer : split_answers(prediction.text)) {
    SnapResult r = transm(answer, slot.candidates, uncased);
    chosen.push_back(r.chosen_index);
    out.parts.push_back(std::move(r));
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  std::vector<std::string> answers;
  for (size_t i : chosen) answers.push_back(slot.candidates[i]);
  out.snapped = join(answers, kAnswerDelimiter);
  return out;
}

TransformResult transform_run(std::span<const RawPrediction> predictions,
                              const Corpus& corpus) {
  TransformResult result;
  for (const auto& p : predictions) {
    const SlotAnnotation* slot = corpus.find_slot(p.key.tweet_id, p.key.slot);
    if (slot == nullptr) {
      result.errors.push_back(
          {p.key, "no slot " + describe(p.key) + " in corpus"});
      continue;
    }
    try {
      result.snapped.push_back(
          snap_prediction(p, *slot, corpus.policy().uncased()));
    } catch (const Error& e) {
      result.errors.push_back({p.key, e.what()});
    }
  }
  return result;
}

}  // namespace slotforge
