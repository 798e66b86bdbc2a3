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

#ifndef ROBUST_FTAP_LP_H_
#define ROBUST_FTAP_LP_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robust_ftap/rational.h"

namespace robust_ftap {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Sense { kMaximize, kMinimize };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus status);

struct LinearConstraint {
  RationalVector coefficients;
  Relation relation = Relation::kLessEqual;
  Rational rhs;
};

struct VariableBounds {
  std::optional<Rational> lower = Rational(0);
  std::optional<Rational> upper;

  static VariableBounds Free() { return {std::nullopt, std::nullopt}; }
  static VariableBounds NonNegative() { return {Rational(0), std::nullopt}; }
  static VariableBounds Box(const Rational& lo, const Rational& hi) {
    return {lo, hi};
  }
};

struct LinearProgram {
  Sense sense = Sense::kMaximize;
  RationalVector objective;
  std::vector<LinearConstraint> constraints;
  // One entry per variable. Left empty, every variable is nonnegative.
  std::vector<VariableBounds> bounds;

  std::size_t variable_count() const { return objective.size(); }
  VariableBounds BoundsOf(std::size_t j) const {
    return bounds.empty() ? VariableBounds::NonNegative() : bounds.at(j);
  }
  void AddConstraint(RationalVector coefficients, Relation relation,
                     Rational rhs) {
    constraints.push_back({std::move(coefficients), relation, std::move(rhs)});
  }
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  // Optimal: the solution. Unbounded: an improving recession direction.
  RationalVector primal;
  // Optimal: one multiplier per constraint. Infeasible: a Farkas ray with
  // the sign convention of CheckInfeasibilityCertificate.
  RationalVector dual;
  // Optimal: objective minus A^T dual, per variable.
  RationalVector reduced_costs;
  Rational value;
};

// Exact two-phase primal simplex with Bland's rule. Throws
// DimensionMismatch on malformed input.
LpSolution SolveLp(const LinearProgram& lp);

void ValidateLp(const LinearProgram& lp);

// Certificate checks. None of them call the solver.
bool IsPrimalFeasible(const LinearProgram& lp, std::span<const Rational> x);

// Verifies primal feasibility, dual sign conventions and that the primal and
// dual objective values coincide exactly. `why` receives the first failure.
bool CheckOptimalityCertificate(const LinearProgram& lp, const LpSolution& sol,
                                std::string* why = nullptr);

// y certifies infeasibility if y_i >= 0 on <= rows, y_i <= 0 on >= rows and
// min over the variable box of (A^T y).x exceeds b.y.
bool CheckInfeasibilityCertificate(const LinearProgram& lp,
                                   std::span<const Rational> y);

// r lies in the recession cone of the feasible region and improves the
// objective strictly.
bool CheckUnboundedRay(const LinearProgram& lp, std::span<const Rational> ray);

// Weights lambda >= 0 with sum 1 and sum_k lambda_k points[k] = target, or
// nullopt when target is outside conv(points).
std::optional<RationalVector> FindConvexCombination(
    const RationalMatrix& points, std::span<const Rational> target);

}  // namespace robust_ftap

#endif  // ROBUST_FTAP_LP_H_
