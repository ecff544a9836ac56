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

#ifndef SLOTFORGE_SRC_RATIONAL_H_
#define SLOTFORGE_SRC_RATIONAL_H_

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace slotforge {

// Compare against Rational(n), not a bare integer: rational == int never
// returns under C++20 with Boost 1.74.
using Rational = boost::rational<std::int64_t>;

// num/den, or 0 when den is 0.
inline Rational ratio_or_zero(std::int64_t num, std::int64_t den) {
  return den == 0 ? Rational(0) : Rational(num, den);
}

// Fixed-point rendering with round-half-away-from-zero, computed exactly.
// format_fixed(Rational(2, 3), 4) == "0.6667".
std::string format_fixed(const Rational& value, int decimals = 4);

// Same as format_fixed, with a leading '+' for non-negative values.
std::string format_signed(const Rational& value, int decimals = 4);

// "num/den", e.g. "2/31".
std::string format_exact(const Rational& value);

}  // namespace slotforge

#endif  // SLOTFORGE_SRC_RATIONAL_H_
