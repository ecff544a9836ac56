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

#include "text.h"

#include <algorithm>
#include <stdexcept>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace slotforge {
namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || instance == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *instance;
}

icu::UnicodeString apply_nfc(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(text, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  return out;
}

}  // namespace

std::string normalize(std::string_view text, bool uncased) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u = apply_nfc(u);
  if (uncased) {
    u.toLower(icu::Locale::getRoot());
    u = apply_nfc(u);
  }
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::u32string to_scalars(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

std::string to_utf8(std::u32string_view scalars) {
  std::string out;
  out.reserve(scalars.size());
  for (char32_t c : scalars) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      out += "\xEF\xBF\xBD";
    } else {
      out.append(reinterpret_cast<const char*>(buf), n);
    }
  }
  return out;
}

size_t scalar_length(std::string_view utf8) { return to_scalars(utf8).size(); }

TextPolicy::TextPolicy() : TextPolicy(true, {"not specified"}) {}

TextPolicy::TextPolicy(bool uncased, std::vector<std::string> null_answers)
    : uncased_(uncased), null_answers_(std::move(null_answers)) {
  for (const auto& n : null_answers_) normalized_nulls_.push_back(normalize(n));
}

bool TextPolicy::is_null_answer(std::string_view text) const {
  const std::string n = normalize(text);
  return std::find(normalized_nulls_.begin(), normalized_nulls_.end(), n) !=
         normalized_nulls_.end();
}

std::vector<std::string> split_answers(std::string_view text) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = text.find(kAnswerDelimiter, start);
    const std::string_view piece = text.substr(
        start, pos == std::string_view::npos ? std::string_view::npos
                                             : pos - start);
    if (!piece.empty()) parts.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + kAnswerDelimiter.size();
  }
  return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace slotforge
