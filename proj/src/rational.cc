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

#include "rational.h"

#include <cstdlib>

namespace slotforge {

std::string format_fixed(const Rational& value, int decimals) {
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const bool negative = value < 0;
  const std::int64_t num = std::abs(value.numerator());
  const std::int64_t den = value.denominator();
  // round(num * scale / den), half away from zero.
  const __int128 scaled = static_cast<__int128>(num) * scale;
  auto rounded = static_cast<std::int64_t>((2 * scaled + den) / (2 * den));
  const std::int64_t whole = rounded / scale;
  const std::int64_t frac = rounded % scale;
  std::string out = (negative && rounded != 0) ? "-" : "";
  out += std::to_string(whole);
  if (decimals > 0) {
    std::string digits = std::to_string(frac);
    out += '.';
    out += std::string(decimals - digits.size(), '0');
    out += digits;
  }
  return out;
}

std::string format_signed(const Rational& value, int decimals) {
  std::string out = format_fixed(value, decimals);
  if (out.front() != '-') out.insert(out.begin(), '+');
  return out;
}

std::string format_exact(const Rational& value) {
  return std::to_string(value.numerator()) + "/" +
         std::to_string(value.denominator());
}

}  // namespace slotforge
