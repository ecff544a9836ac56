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

// Raw prediction acquisition: prediction files, the remote generation
// service, and alignment of predictions with corpus slots.

#ifndef SLOTFORGE_SRC_PREDICT_H_
#define SLOTFORGE_SRC_PREDICT_H_

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "corpus.h"
#include "editdist.h"
#include "json.hpp"
#include "prediction.h"
#include "seqgen.h"

namespace slotforge {

// Records are {"tweet_id": str, "slot": str, "text": str}; other fields are
// ignored, so snapped-prediction files load as well. Duplicate keys are
// rejected with both line numbers.
std::vector<RawPrediction> parse_predictions(std::istream& in);
std::vector<RawPrediction> load_predictions(const std::filesystem::path& path);

void write_predictions(std::span<const RawPrediction> predictions,
                       std::ostream& out);
void save_predictions(std::span<const RawPrediction> predictions,
                      const std::filesystem::path& path);

// Snapped record: the prediction schema with "text" set to the snapped
// answer, plus "raw" and per-answer distance diagnostics.
nlohmann::json snapped_to_json(const SnappedPrediction& snapped);
std::string serialize_snapped(std::span<const SnappedPrediction> snapped);

struct Alignment {
  std::map<PredictionKey, std::string> predictions;
  // Corpus slots with no prediction, in corpus order.
  std::vector<PredictionKey> missing;
  // Predictions whose key is not a corpus slot.
  std::vector<KeyedError> errors;
};

Alignment align(std::span<const RawPrediction> predictions, const Corpus& corpus);

struct FetchConfig {
  // http://host[:port][/base]; requests go to <base>/generate.
  std::string endpoint;
  size_t batch_size = 16;
  int max_retries = 3;
  std::chrono::milliseconds timeout{30000};
  std::chrono::milliseconds initial_backoff{200};
  size_t max_in_flight = 1;
  // Sent as "Authorization: Bearer <token>" when non-empty.
  std::string bearer_token;
};

// Environment variable consulted for the endpoint when no flag is given.
inline constexpr const char* kEndpointEnvVar = "SLOTFORGE_GEN_ENDPOINT";

// One prediction per slot example, in input order. Each batch of at most
// batch_size sources is one POST /generate. Connection failures, 408, 429 and
// 5xx responses are retried with exponential backoff; any batch that still
// fails, answers with another status, or returns the wrong number of
// predictions fails the whole fetch with a remote error.
std::vector<RawPrediction> fetch_predictions(const FetchConfig& config,
                                             std::span<const Example> examples);

}  // namespace slotforge

#endif  // SLOTFORGE_SRC_PREDICT_H_
