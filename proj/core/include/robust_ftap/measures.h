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

#ifndef ROBUST_FTAP_MEASURES_H_
#define ROBUST_FTAP_MEASURES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robust_ftap/rational.h"

namespace robust_ftap {

// Sorted, duplicate-free outcome indices.
using OutcomeSet = std::vector<std::size_t>;

// A finite, ordered set of labelled outcomes. Every measure and payoff in the
// library is a vector indexed against this order.
class SampleSpace {
 public:
  explicit SampleSpace(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> IndexOf(std::string_view label) const;

  bool operator==(const SampleSpace&) const = default;

 private:
  std::vector<std::string> labels_;
};

class ProbabilityMeasure {
 public:
  // Throws InvalidInput unless every mass is >= 0 and they sum to exactly 1.
  explicit ProbabilityMeasure(RationalVector masses);

  static ProbabilityMeasure Dirac(std::size_t size, std::size_t at);
  static ProbabilityMeasure Uniform(std::size_t size);

  std::size_t size() const { return masses_.size(); }
  const Rational& operator[](std::size_t i) const { return masses_[i]; }
  const RationalVector& masses() const { return masses_; }

  OutcomeSet Support() const;
  Rational Probability(const OutcomeSet& event) const;
  Rational Expectation(std::span<const Rational> values) const;

  bool operator==(const ProbabilityMeasure&) const = default;

 private:
  RationalVector masses_;
};

class SignedMeasure {
 public:
  explicit SignedMeasure(RationalVector masses);
  static SignedMeasure Zero(std::size_t size);

  std::size_t size() const { return masses_.size(); }
  const Rational& operator[](std::size_t i) const { return masses_[i]; }
  const RationalVector& masses() const { return masses_; }
  Rational Total() const;

  SignedMeasure operator+(const SignedMeasure& other) const;
  SignedMeasure operator-(const SignedMeasure& other) const;
  SignedMeasure operator*(const Rational& scale) const;

  bool operator==(const SignedMeasure&) const = default;

 private:
  RationalVector masses_;
};

struct HahnJordanDecomposition {
  SignedMeasure positive;
  SignedMeasure negative;
  // Outcomes with mass >= 0; zero-mass outcomes are assigned here.
  OutcomeSet positive_set;
};

HahnJordanDecomposition HahnJordan(const SignedMeasure& mu);

// Sum of absolute masses, i.e. mu+(Omega+) + mu-(Omega-).
Rational TotalVariation(const SignedMeasure& mu);

// conv(vertices). Redundant vertices are kept as given.
class AmbiguitySet {
 public:
  explicit AmbiguitySet(std::vector<ProbabilityMeasure> vertices);

  std::size_t outcome_count() const { return vertices_.front().size(); }
  std::size_t vertex_count() const { return vertices_.size(); }
  const ProbabilityMeasure& vertex(std::size_t i) const { return vertices_.at(i); }
  const std::vector<ProbabilityMeasure>& vertices() const { return vertices_; }

  // Union of vertex supports. Its complement is the largest polar set.
  OutcomeSet QuasiSureSupport() const;

  // sum_i weights[i] * vertex(i); weights must be a probability vector.
  ProbabilityMeasure Mixture(std::span<const Rational> weights) const;

 private:
  std::vector<ProbabilityMeasure> vertices_;
};

// A function on the sample space. Compared modulo polar sets of an
// ambiguity set.
class BoundedFunction {
 public:
  explicit BoundedFunction(RationalVector values);
  static BoundedFunction Indicator(std::size_t size, const OutcomeSet& event);
  static BoundedFunction Constant(std::size_t size, const Rational& c);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  const RationalVector& values() const { return values_; }

  bool EqualQuasiSurely(const BoundedFunction& other,
                        const AmbiguitySet& family) const;

 private:
  RationalVector values_;
};

OutcomeSet QuasiSureSupport(const AmbiguitySet& family);

// Q << some member of conv(family). On a finite space this is support
// containment in the quasi-sure support.
bool DominatedBy(const ProbabilityMeasure& q, const AmbiguitySet& family);

// p << q.
bool AbsolutelyContinuous(const ProbabilityMeasure& p,
                          const ProbabilityMeasure& q);

// max |h| over the quasi-sure support.
Rational QsSupNorm(const BoundedFunction& h, const AmbiguitySet& family);

bool IsSubset(const OutcomeSet& inner, const OutcomeSet& outer);

}  // namespace robust_ftap

#endif  // ROBUST_FTAP_MEASURES_H_
