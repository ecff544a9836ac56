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

#ifndef SLOTFORGE_SRC_PREDICTION_H_
#define SLOTFORGE_SRC_PREDICTION_H_

#include <compare>
#include <string>

namespace slotforge {

// Identifies one slot of one tweet.
struct PredictionKey {
  std::string tweet_id;
  std::string slot;

  auto operator<=>(const PredictionKey&) const = default;
  bool operator==(const PredictionKey&) const = default;
};

// Generated answer text for a slot example, possibly several answers joined
// by " ||| ".
struct RawPrediction {
  PredictionKey key;
  std::string text;

  bool operator==(const RawPrediction&) const = default;
};

inline std::string describe(const PredictionKey& key) {
  return "(" + key.tweet_id + ", " + key.slot + ")";
}

}  // namespace slotforge

#endif  // SLOTFORGE_SRC_PREDICTION_H_
