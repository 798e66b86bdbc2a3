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

#include "robust_ftap/measures.h"

#include <algorithm>
#include <set>

#include "robust_ftap/errors.h"

namespace robust_ftap {

SampleSpace::SampleSpace(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw InvalidInput("sample space has no outcomes");
  std::set<std::string_view> seen;
  for (const std::string& label : labels_) {
    if (label.empty()) throw InvalidInput("outcome labels must be nonempty");
    if (!seen.insert(label).second) {
      throw InvalidInput("duplicate outcome label \"" + label + "\"");
    }
  }
}

std::optional<std::size_t> SampleSpace::IndexOf(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

ProbabilityMeasure::ProbabilityMeasure(RationalVector masses)
    : masses_(std::move(masses)) {
  if (masses_.empty()) throw InvalidInput("probability measure on empty space");
  for (const Rational& m : masses_) {
    if (m < 0) {
      throw InvalidInput("negative probability mass " + FormatRational(m));
    }
  }
  if (Sum(masses_) != 1) {
    throw InvalidInput("probability masses sum to " +
                       FormatRational(Sum(masses_)) + ", expected 1");
  }
}

ProbabilityMeasure ProbabilityMeasure::Dirac(std::size_t size, std::size_t at) {
  RationalVector masses(size, 0);
  masses.at(at) = 1;
  return ProbabilityMeasure(std::move(masses));
}

ProbabilityMeasure ProbabilityMeasure::Uniform(std::size_t size) {
  return ProbabilityMeasure(
      RationalVector(size, Rational(1, static_cast<unsigned long>(size))));
}

OutcomeSet ProbabilityMeasure::Support() const {
  OutcomeSet support;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (masses_[i] > 0) support.push_back(i);
  }
  return support;
}

Rational ProbabilityMeasure::Probability(const OutcomeSet& event) const {
  Rational total = 0;
  for (std::size_t i : event) total += masses_.at(i);
  return total;
}

Rational ProbabilityMeasure::Expectation(std::span<const Rational> values) const {
  return Dot(masses_, values);
}

SignedMeasure::SignedMeasure(RationalVector masses)
    : masses_(std::move(masses)) {}

SignedMeasure SignedMeasure::Zero(std::size_t size) {
  return SignedMeasure(RationalVector(size, 0));
}

Rational SignedMeasure::Total() const { return Sum(masses_); }

SignedMeasure SignedMeasure::operator+(const SignedMeasure& other) const {
  if (other.size() != size()) throw DimensionMismatch("signed measure sum");
  RationalVector out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = masses_[i] + other[i];
  return SignedMeasure(std::move(out));
}

SignedMeasure SignedMeasure::operator-(const SignedMeasure& other) const {
  return *this + other * Rational(-1);
}

SignedMeasure SignedMeasure::operator*(const Rational& scale) const {
  RationalVector out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = masses_[i] * scale;
  return SignedMeasure(std::move(out));
}

HahnJordanDecomposition HahnJordan(const SignedMeasure& mu) {
  RationalVector plus(mu.size(), 0);
  RationalVector minus(mu.size(), 0);
  OutcomeSet positive_set;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] >= 0) {
      plus[i] = mu[i];
      positive_set.push_back(i);
    } else {
      minus[i] = -mu[i];
    }
  }
  return {SignedMeasure(std::move(plus)), SignedMeasure(std::move(minus)),
          std::move(positive_set)};
}

Rational TotalVariation(const SignedMeasure& mu) {
  Rational total = 0;
  for (const Rational& m : mu.masses()) total += Abs(m);
  return total;
}

AmbiguitySet::AmbiguitySet(std::vector<ProbabilityMeasure> vertices)
    : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw InvalidInput("ambiguity set has no vertices");
  for (const ProbabilityMeasure& v : vertices_) {
    if (v.size() != vertices_.front().size()) {
      throw DimensionMismatch("ambiguity set vertices live on different spaces");
    }
  }
}

OutcomeSet AmbiguitySet::QuasiSureSupport() const {
  OutcomeSet support;
  for (std::size_t i = 0; i < outcome_count(); ++i) {
    for (const ProbabilityMeasure& v : vertices_) {
      if (v[i] > 0) {
        support.push_back(i);
        break;
      }
    }
  }
  return support;
}

ProbabilityMeasure AmbiguitySet::Mixture(std::span<const Rational> weights) const {
  if (weights.size() != vertices_.size()) {
    throw DimensionMismatch("mixture weights do not match vertex count");
  }
  RationalVector masses(outcome_count(), 0);
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    if (weights[k] < 0) throw InvalidInput("negative mixture weight");
    if (weights[k] == 0) continue;
    for (std::size_t i = 0; i < masses.size(); ++i) {
      masses[i] += weights[k] * vertices_[k][i];
    }
  }
  return ProbabilityMeasure(std::move(masses));
}

BoundedFunction::BoundedFunction(RationalVector values)
    : values_(std::move(values)) {}

BoundedFunction BoundedFunction::Indicator(std::size_t size,
                                           const OutcomeSet& event) {
  RationalVector values(size, 0);
  for (std::size_t i : event) values.at(i) = 1;
  return BoundedFunction(std::move(values));
}

BoundedFunction BoundedFunction::Constant(std::size_t size, const Rational& c) {
  return BoundedFunction(RationalVector(size, c));
}

bool BoundedFunction::EqualQuasiSurely(const BoundedFunction& other,
                                       const AmbiguitySet& family) const {
  if (other.size() != size() || family.outcome_count() != size()) {
    throw DimensionMismatch("function comparison across spaces");
  }
  for (std::size_t i : family.QuasiSureSupport()) {
    if (values_[i] != other[i]) return false;
  }
  return true;
}

OutcomeSet QuasiSureSupport(const AmbiguitySet& family) {
  return family.QuasiSureSupport();
}

bool IsSubset(const OutcomeSet& inner, const OutcomeSet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

bool DominatedBy(const ProbabilityMeasure& q, const AmbiguitySet& family) {
  if (q.size() != family.outcome_count()) {
    throw DimensionMismatch("measure and ambiguity set on different spaces");
  }
  return IsSubset(q.Support(), family.QuasiSureSupport());
}

bool AbsolutelyContinuous(const ProbabilityMeasure& p,
                          const ProbabilityMeasure& q) {
  if (p.size() != q.size()) throw DimensionMismatch("measures on different spaces");
  return IsSubset(p.Support(), q.Support());
}

Rational QsSupNorm(const BoundedFunction& h, const AmbiguitySet& family) {
  if (h.size() != family.outcome_count()) {
    throw DimensionMismatch("function and ambiguity set on different spaces");
  }
  Rational norm = 0;
  for (std::size_t i : family.QuasiSureSupport()) norm = std::max(norm, Abs(h[i]));
  return norm;
}

}  // namespace robust_ftap
