// Copyright 2026 The robust_ftap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROBUST_FTAP_RATIONAL_H_
#define ROBUST_FTAP_RATIONAL_H_

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace robust_ftap {

// Arbitrary precision rational, always kept in lowest terms.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

// Parses "p", "-p", "p/q" (q > 0) or a decimal "a.b" with at most
// `max_fraction_digits` digits after the point. The result is exact.
// Throws InvalidInput on anything else.
Rational ParseRational(std::string_view text, int max_fraction_digits = 12);

// Accepts only the canonical output of FormatRational: lowest terms,
// positive denominator, no leading zeros, no "/1", no "-0".
bool ParseCanonicalRational(std::string_view text, Rational* out);

// Canonical "p/q" or "p" form.
std::string FormatRational(const Rational& value);

Rational Dot(std::span<const Rational> a, std::span<const Rational> b);
Rational Sum(std::span<const Rational> values);
Rational Abs(const Rational& value);

}  // namespace robust_ftap

#endif  // ROBUST_FTAP_RATIONAL_H_
