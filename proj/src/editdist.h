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

// Levenshtein distance over Unicode scalar values and TransM, which snaps a
// generated answer onto the candidate with the smallest length-normalized
// edit distance.

#ifndef SLOTFORGE_SRC_EDITDIST_H_
#define SLOTFORGE_SRC_EDITDIST_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.h"
#include "prediction.h"
#include "rational.h"

namespace slotforge {

size_t levenshtein(std::u32string_view a, std::u32string_view b);
// Decodes both operands as UTF-8 first; no normalization.
size_t levenshtein_utf8(std::string_view a, std::string_view b);

// levenshtein(norm(p), norm(c)) / |norm(c)|, lengths in scalar values.
// Asymmetric. Throws a usage error when the normalized candidate is empty.
Rational normalized_distance(std::string_view prediction,
                             std::string_view candidate, bool uncased = true);

struct SnapResult {
  std::string chosen;  // original candidate text
  size_t chosen_index = 0;
  size_t distance = 0;
  Rational normalized_distance;
  bool exact = false;

  bool operator==(const SnapResult&) const = default;
};

// Picks the candidate minimizing normalized_distance; ties go to the smaller
// raw distance, then the earlier candidate. Throws a usage error on an empty
// candidate list or an empty candidate.
SnapResult transm(std::string_view prediction,
                  const std::vector<std::string>& candidates,
                  bool uncased = true);

struct SnappedPrediction {
  PredictionKey key;
  std::string raw;
  // Distinct snapped answers in candidate order, joined by " ||| ".
  std::string snapped;
  // One entry per non-empty answer in `raw`.
  std::vector<SnapResult> parts;

  bool operator==(const SnappedPrediction&) const = default;
};

// Snaps each " ||| "-separated answer of the prediction independently.
SnappedPrediction snap_prediction(const RawPrediction& prediction,
                                  const SlotAnnotation& slot,
                                  bool uncased = true);

struct KeyedError {
  PredictionKey key;
  std::string message;

  bool operator==(const KeyedError&) const = default;
};

struct TransformResult {
  std::vector<SnappedPrediction> snapped;  // input order, errors skipped
  std::vector<KeyedError> errors;
};

// Uses the corpus policy's case mode. Predictions whose key is not in the
// corpus become keyed errors; the rest are still processed.
TransformResult transform_run(std::span<const RawPrediction> predictions,
                              const Corpus& corpus);

}  // namespace slotforge

#endif  // SLOTFORGE_SRC_EDITDIST_H_
