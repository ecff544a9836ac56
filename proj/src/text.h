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

// Text normalization shared by ingestion, snapping and scoring. Comparison
// always happens on normalized text; stored text stays verbatim.

#ifndef SLOTFORGE_SRC_TEXT_H_
#define SLOTFORGE_SRC_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace slotforge {

// Joins multiple choices in a source sequence and multiple answers in a
// target or prediction.
inline constexpr std::string_view kAnswerDelimiter = " ||| ";

// NFC, then (when `uncased`) full Unicode lowercasing followed by NFC again.
// Idempotent. Ill-formed UTF-8 is replaced with U+FFFD.
std::string normalize(std::string_view text, bool uncased);

// Decodes UTF-8 into Unicode scalar values.
std::u32string to_scalars(std::string_view utf8);
std::string to_utf8(std::u32string_view scalars);

// Number of Unicode scalar values in `utf8`.
size_t scalar_length(std::string_view utf8);

struct NormalizedText {
  std::string original;
  std::string normalized;
};

// How answers are compared: case mode plus the predefined no-answer choices.
class TextPolicy {
 public:
  TextPolicy();
  TextPolicy(bool uncased, std::vector<std::string> null_answers);

  bool uncased() const { return uncased_; }
  const std::vector<std::string>& null_answers() const { return null_answers_; }

  std::string normalize(std::string_view text) const {
    return slotforge::normalize(text, uncased_);
  }
  NormalizedText normalized(std::string_view text) const {
    return {std::string(text), normalize(text)};
  }
  bool is_null_answer(std::string_view text) const;

  bool operator==(const TextPolicy& other) const = default;

 private:
  bool uncased_ = true;
  std::vector<std::string> null_answers_;
  std::vector<std::string> normalized_nulls_;
};

// Splits on kAnswerDelimiter, dropping empty pieces.
std::vector<std::string> split_answers(std::string_view text);

std::string join(const std::vector<std::string>& parts,
                 std::string_view sep = kAnswerDelimiter);

}  // namespace slotforge

#endif  // SLOTFORGE_SRC_TEXT_H_
