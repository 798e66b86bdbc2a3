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

#include "robust_ftap/rational.h"

#include <cctype>

#include "robust_ftap/errors.h"

namespace robust_ftap {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return "InvalidInput";
    case ErrorKind::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::kEmptyPolytope:
      return "EmptyPolytope";
    case ErrorKind::kEnumerationCapExceeded:
      return "EnumerationCapExceeded";
    case ErrorKind::kHypothesisViolated:
      return "HypothesisViolated";
    case ErrorKind::kNaViolated:
      return "NaViolated";
    case ErrorKind::kEmptyMartingalePolytope:
      return "EmptyMartingalePolytope";
    case ErrorKind::kBoundViolated:
      return "BoundViolated";
    case ErrorKind::kInternal:
      return "Internal";
  }
  return "Unknown";
}

namespace {

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void Reject(std::string_view text, const char* why) {
  throw InvalidInput("malformed rational \"" + std::string(text) + "\": " +
                     why);
}

}  // namespace

Rational ParseRational(std::string_view text, int max_fraction_digits) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!AllDigits(num) || !AllDigits(den)) Reject(text, "expected p/q");
    if (den.front() == '0') Reject(text, "denominator must start with 1-9");
    value = Rational(mpz_class(std::string(num), 10), mpz_class(std::string(den), 10));
    value.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (!AllDigits(whole) || !AllDigits(frac)) Reject(text, "expected a.b");
    if (static_cast<int>(frac.size()) > max_fraction_digits) {
      Reject(text, "too many fractional digits");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    value = Rational(mpz_class(std::string(whole) + std::string(frac), 10), scale);
    value.canonicalize();
  } else {
    if (!AllDigits(body)) Reject(text, "expected an integer");
    value = Rational(mpz_class(std::string(body), 10));
  }
  return negative ? Rational(-value) : value;
}

bool ParseCanonicalRational(std::string_view text, Rational* out) {
  try {
    if (text.find('.') != std::string_view::npos) return false;
    Rational value = ParseRational(text, 0);
    if (FormatRational(value) != text) return false;
    *out = value;
    return true;
  } catch (const InvalidInput&) {
    return false;
  }
}

std::string FormatRational(const Rational& value) { return value.get_str(); }

Rational Dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("dot product of vectors with sizes " +
                            std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  }
  Rational total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

Rational Sum(std::span<const Rational> values) {
  Rational total = 0;
  for (const Rational& v : values) total += v;
  return total;
}

Rational Abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace robust_ftap
