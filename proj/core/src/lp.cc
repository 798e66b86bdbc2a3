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

#include "robust_ftap/lp.h"

#include <limits>
#include <string>

#include "robust_ftap/errors.h"

namespace robust_ftap {

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "Optimal";
    case LpStatus::kInfeasible:
      return "Infeasible";
    case LpStatus::kUnbounded:
      return "Unbounded";
  }
  return "Unknown";
}

void ValidateLp(const LinearProgram& lp) {
  const std::size_t n = lp.variable_count();
  if (!lp.bounds.empty() && lp.bounds.size() != n) {
    throw DimensionMismatch("LP has " + std::to_string(n) +
                            " variables but " +
                            std::to_string(lp.bounds.size()) + " bounds");
  }
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    if (lp.constraints[i].coefficients.size() != n) {
      throw DimensionMismatch("LP constraint " + std::to_string(i) + " has " +
                              std::to_string(lp.constraints[i].coefficients.size()) +
                              " coefficients, expected " + std::to_string(n));
    }
  }
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

Relation Flip(Relation r) {
  switch (r) {
    case Relation::kLessEqual:
      return Relation::kGreaterEqual;
    case Relation::kGreaterEqual:
      return Relation::kLessEqual;
    case Relation::kEqual:
      return Relation::kEqual;
  }
  return r;
}

bool BoundsCrossed(const LinearProgram& lp) {
  for (std::size_t j = 0; j < lp.variable_count(); ++j) {
    VariableBounds b = lp.BoundsOf(j);
    if (b.lower && b.upper && *b.lower > *b.upper) return true;
  }
  return false;
}

// Dense tableau over the standard form
//   max c.x'  s.t.  A'x' + S s + I a = b',  x', s, a >= 0,  b' >= 0
// obtained by shifting/negating/splitting the original variables.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) { Build(); }

  LpSolution Run();

 private:
  struct StructuralColumn {
    std::size_t variable;
    int sign;
  };
  struct Row {
    RationalVector coefficients;  // over structural columns
    Relation relation;
    Rational rhs;
    std::size_t origin;  // original constraint index, or kNone for bound rows
    int flip = 1;
  };

  void Build();
  void Pivot(std::size_t row, std::size_t col);
  // Returns kNone at optimality, otherwise the entering column of an
  // unbounded direction.
  std::size_t Iterate(bool allow_artificial);
  RationalVector RowDuals(const RationalVector& costs) const;
  void ResetReducedCosts(const RationalVector& costs);

  const LinearProgram& lp_;
  std::vector<StructuralColumn> structural_;
  RationalVector offset_;
  std::vector<Row> rows_;

  std::size_t num_structural_ = 0;
  std::size_t num_cols_ = 0;
  std::size_t first_artificial_ = 0;
  std::vector<std::size_t> unit_col_;  // column holding e_r initially
  RationalMatrix tableau_;
  RationalVector rhs_;
  std::vector<std::size_t> basis_;
  RationalVector reduced_;  // c_j - c_B^T B^-1 A_j
};

void Simplex::Build() {
  const std::size_t n = lp_.variable_count();
  offset_.assign(n, 0);
  std::vector<std::pair<std::size_t, Rational>> box_rows;
  for (std::size_t j = 0; j < n; ++j) {
    VariableBounds b = lp_.BoundsOf(j);
    if (b.lower) {
      offset_[j] = *b.lower;
      structural_.push_back({j, 1});
      if (b.upper) box_rows.emplace_back(structural_.size() - 1, *b.upper - *b.lower);
    } else if (b.upper) {
      offset_[j] = *b.upper;
      structural_.push_back({j, -1});
    } else {
      structural_.push_back({j, 1});
      structural_.push_back({j, -1});
    }
  }
  num_structural_ = structural_.size();

  for (std::size_t i = 0; i < lp_.constraints.size(); ++i) {
    const LinearConstraint& c = lp_.constraints[i];
    Row row{RationalVector(num_structural_, 0), c.relation, c.rhs, i};
    for (std::size_t k = 0; k < num_structural_; ++k) {
      const StructuralColumn& col = structural_[k];
      row.coefficients[k] = c.coefficients[col.variable] * col.sign;
    }
    for (std::size_t j = 0; j < n; ++j) row.rhs -= c.coefficients[j] * offset_[j];
    rows_.push_back(std::move(row));
  }
  for (auto& [col, width] : box_rows) {
    Row row{RationalVector(num_structural_, 0), Relation::kLessEqual, width, kNone};
    row.coefficients[col] = 1;
    rows_.push_back(std::move(row));
  }
  for (Row& row : rows_) {
    if (row.rhs < 0) {
      for (Rational& a : row.coefficients) a = -a;
      row.rhs = -row.rhs;
      row.relation = Flip(row.relation);
      row.flip = -1;
    }
  }

  const std::size_t m = rows_.size();
  std::size_t num_slack = 0;
  std::size_t num_artificial = 0;
  for (const Row& row : rows_) {
    if (row.relation != Relation::kEqual) ++num_slack;
    if (row.relation != Relation::kLessEqual) ++num_artificial;
  }
  first_artificial_ = num_structural_ + num_slack;
  num_cols_ = first_artificial_ + num_artificial;

  tableau_.assign(m, RationalVector(num_cols_, 0));
  rhs_.assign(m, 0);
  basis_.assign(m, kNone);
  unit_col_.assign(m, kNone);
  std::size_t next_slack = num_structural_;
  std::size_t next_artificial = first_artificial_;
  for (std::size_t r = 0; r < m; ++r) {
    const Row& row = rows_[r];
    for (std::size_t k = 0; k < num_structural_; ++k) {
      tableau_[r][k] = row.coefficients[k];
    }
    rhs_[r] = row.rhs;
    switch (row.relation) {
      case Relation::kLessEqual:
        tableau_[r][next_slack] = 1;
        unit_col_[r] = next_slack++;
        break;
      case Relation::kGreaterEqual:
        tableau_[r][next_slack++] = -1;
        tableau_[r][next_artificial] = 1;
        unit_col_[r] = next_artificial++;
        break;
      case Relation::kEqual:
        tableau_[r][next_artificial] = 1;
        unit_col_[r] = next_artificial++;
        break;
    }
    basis_[r] = unit_col_[r];
  }
}

void Simplex::Pivot(std::size_t row, std::size_t col) {
  const Rational pivot = tableau_[row][col];
  RationalVector& prow = tableau_[row];
  for (Rational& v : prow) v /= pivot;
  rhs_[row] /= pivot;
  for (std::size_t r = 0; r < tableau_.size(); ++r) {
    if (r == row || tableau_[r][col] == 0) continue;
    const Rational factor = tableau_[r][col];
    RationalVector& target = tableau_[r];
    for (std::size_t j = 0; j < num_cols_; ++j) {
      if (prow[j] != 0) target[j] -= factor * prow[j];
    }
    rhs_[r] -= factor * rhs_[row];
  }
  if (reduced_[col] != 0) {
    const Rational factor = reduced_[col];
    for (std::size_t j = 0; j < num_cols_; ++j) {
      if (prow[j] != 0) reduced_[j] -= factor * prow[j];
    }
  }
  basis_[row] = col;
}

void Simplex::ResetReducedCosts(const RationalVector& costs) {
  reduced_ = costs;
  for (std::size_t r = 0; r < tableau_.size(); ++r) {
    const Rational& cb = costs[basis_[r]];
    if (cb == 0) continue;
    for (std::size_t j = 0; j < num_cols_; ++j) {
      if (tableau_[r][j] != 0) reduced_[j] -= cb * tableau_[r][j];
    }
  }
}

std::size_t Simplex::Iterate(bool allow_artificial) {
  const std::size_t limit = allow_artificial ? num_cols_ : first_artificial_;
  while (true) {
    // Bland: lowest-index improving column, then lowest-index leaving basic.
    std::size_t entering = kNone;
    for (std::size_t j = 0; j < limit; ++j) {
      if (reduced_[j] > 0) {
        entering = j;
        break;
      }
    }
    if (entering == kNone) return kNone;
    std::size_t leaving = kNone;
    Rational best_ratio;
    for (std::size_t r = 0; r < tableau_.size(); ++r) {
      if (tableau_[r][entering] <= 0) continue;
      Rational ratio = rhs_[r] / tableau_[r][entering];
      if (leaving == kNone || ratio < best_ratio ||
          (ratio == best_ratio && basis_[r] < basis_[leaving])) {
        leaving = r;
        best_ratio = ratio;
      }
    }
    if (leaving == kNone) return entering;
    Pivot(leaving, entering);
  }
}

RationalVector Simplex::RowDuals(const RationalVector& costs) const {
  RationalVector y(rows_.size(), 0);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Rational& cb = costs[basis_[k]];
      if (cb != 0) y[r] += cb * tableau_[k][unit_col_[r]];
    }
  }
  return y;
}

LpSolution Simplex::Run() {
  const std::size_t m = rows_.size();
  const std::size_t n = lp_.variable_count();
  LpSolution solution;

  // Phase 1: maximize -(sum of artificials).
  RationalVector phase1(num_cols_, 0);
  for (std::size_t j = first_artificial_; j < num_cols_; ++j) phase1[j] = -1;
  ResetReducedCosts(phase1);
  Iterate(/*allow_artificial=*/true);
  Rational infeasibility = 0;
  for (std::size_t r = 0; r < m; ++r) {
    if (basis_[r] >= first_artificial_) infeasibility += rhs_[r];
  }
  if (infeasibility > 0) {
    RationalVector y_rows = RowDuals(phase1);
    solution.status = LpStatus::kInfeasible;
    solution.dual.assign(lp_.constraints.size(), 0);
    for (std::size_t r = 0; r < m; ++r) {
      if (rows_[r].origin != kNone) {
        solution.dual[rows_[r].origin] = y_rows[r] * rows_[r].flip;
      }
    }
    if (!CheckInfeasibilityCertificate(lp_, solution.dual)) {
      throw InternalError("phase-1 multipliers do not certify infeasibility");
    }
    return solution;
  }

  // Drive zero-level artificials out of the basis where possible; rows where
  // that fails are redundant and keep their artificial at zero.
  for (std::size_t r = 0; r < m; ++r) {
    if (basis_[r] < first_artificial_) continue;
    for (std::size_t j = 0; j < first_artificial_; ++j) {
      if (tableau_[r][j] != 0) {
        Pivot(r, j);
        break;
      }
    }
  }

  // Phase 2 on the true objective, in maximization form.
  const int sense_sign = lp_.sense == Sense::kMaximize ? 1 : -1;
  RationalVector phase2(num_cols_, 0);
  for (std::size_t k = 0; k < num_structural_; ++k) {
    const StructuralColumn& col = structural_[k];
    phase2[k] = lp_.objective[col.variable] * (col.sign * sense_sign);
  }
  ResetReducedCosts(phase2);
  const std::size_t unbounded_col = Iterate(/*allow_artificial=*/false);

  if (unbounded_col != kNone) {
    RationalVector direction(num_cols_, 0);
    direction[unbounded_col] = 1;
    for (std::size_t r = 0; r < m; ++r) {
      direction[basis_[r]] = -tableau_[r][unbounded_col];
    }
    solution.status = LpStatus::kUnbounded;
    solution.primal.assign(n, 0);
    for (std::size_t k = 0; k < num_structural_; ++k) {
      solution.primal[structural_[k].variable] +=
          direction[k] * structural_[k].sign;
    }
    return solution;
  }

  RationalVector values(num_cols_, 0);
  for (std::size_t r = 0; r < m; ++r) values[basis_[r]] = rhs_[r];
  solution.status = LpStatus::kOptimal;
  solution.primal = offset_;
  for (std::size_t k = 0; k < num_structural_; ++k) {
    solution.primal[structural_[k].variable] += values[k] * structural_[k].sign;
  }
  solution.value = Dot(lp_.objective, solution.primal);

  RationalVector y_rows = RowDuals(phase2);
  solution.dual.assign(lp_.constraints.size(), 0);
  for (std::size_t r = 0; r < m; ++r) {
    if (rows_[r].origin != kNone) {
      solution.dual[rows_[r].origin] = y_rows[r] * (rows_[r].flip * sense_sign);
    }
  }
  solution.reduced_costs = lp_.objective;
  for (std::size_t i = 0; i < lp_.constraints.size(); ++i) {
    if (solution.dual[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      solution.reduced_costs[j] -=
          solution.dual[i] * lp_.constraints[i].coefficients[j];
    }
  }
  return solution;
}

bool Satisfies(const Rational& lhs, Relation relation, const Rational& rhs) {
  switch (relation) {
    case Relation::kLessEqual:
      return lhs <= rhs;
    case Relation::kGreaterEqual:
      return lhs >= rhs;
    case Relation::kEqual:
      return lhs == rhs;
  }
  return false;
}

// Multipliers y_i are sign-valid if y_i * (a_i x - b_i) <= 0 for feasible x.
bool MultiplierSignValid(Relation relation, const Rational& y) {
  switch (relation) {
    case Relation::kLessEqual:
      return y >= 0;
    case Relation::kGreaterEqual:
      return y <= 0;
    case Relation::kEqual:
      return true;
  }
  return false;
}

RationalVector TransposeTimes(const LinearProgram& lp,
                              std::span<const Rational> y) {
  RationalVector g(lp.variable_count(), 0);
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    if (y[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) {
      g[j] += y[i] * lp.constraints[i].coefficients[j];
    }
  }
  return g;
}

}  // namespace

LpSolution SolveLp(const LinearProgram& lp) {
  ValidateLp(lp);
  if (BoundsCrossed(lp)) {
    LpSolution solution;
    solution.status = LpStatus::kInfeasible;
    solution.dual.assign(lp.constraints.size(), 0);
    return solution;
  }
  Simplex simplex(lp);
  return simplex.Run();
}

bool IsPrimalFeasible(const LinearProgram& lp, std::span<const Rational> x) {
  if (x.size() != lp.variable_count()) return false;
  for (const LinearConstraint& c : lp.constraints) {
    if (!Satisfies(Dot(c.coefficients, x), c.relation, c.rhs)) return false;
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    VariableBounds b = lp.BoundsOf(j);
    if (b.lower && x[j] < *b.lower) return false;
    if (b.upper && x[j] > *b.upper) return false;
  }
  return true;
}

bool CheckOptimalityCertificate(const LinearProgram& lp, const LpSolution& sol,
                                std::string* why) {
  auto fail = [why](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (sol.status != LpStatus::kOptimal) return fail("status is not Optimal");
  if (!IsPrimalFeasible(lp, sol.primal)) return fail("primal infeasible");
  if (sol.dual.size() != lp.constraints.size()) return fail("dual size");
  const bool maximize = lp.sense == Sense::kMaximize;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const Rational y = maximize ? sol.dual[i] : Rational(-sol.dual[i]);
    if (!MultiplierSignValid(lp.constraints[i].relation, y)) {
      return fail("dual multiplier " + std::to_string(i) + " has wrong sign");
    }
  }
  RationalVector g = TransposeTimes(lp, sol.dual);
  Rational dual_value = Dot(sol.dual, [&] {
    RationalVector b;
    for (const LinearConstraint& c : lp.constraints) b.push_back(c.rhs);
    return b;
  }());
  for (std::size_t j = 0; j < lp.variable_count(); ++j) {
    const Rational d = lp.objective[j] - g[j];
    if (d == 0) continue;
    VariableBounds b = lp.BoundsOf(j);
    // For a max problem d > 0 must be capped by an upper bound; for min the
    // roles of the bounds swap.
    const bool needs_upper = maximize ? d > 0 : d < 0;
    const std::optional<Rational>& bound = needs_upper ? b.upper : b.lower;
    if (!bound) return fail("reduced cost of variable " + std::to_string(j) +
                            " has no matching finite bound");
    dual_value += d * *bound;
  }
  const Rational primal_value = Dot(lp.objective, sol.primal);
  if (primal_value != sol.value) return fail("reported value mismatch");
  if (dual_value != primal_value) {
    return fail("duality gap: primal " + FormatRational(primal_value) +
                " dual " + FormatRational(dual_value));
  }
  return true;
}

bool CheckInfeasibilityCertificate(const LinearProgram& lp,
                                   std::span<const Rational> y) {
  if (BoundsCrossed(lp)) return true;
  if (y.size() != lp.constraints.size()) return false;
  Rational yb = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!MultiplierSignValid(lp.constraints[i].relation, y[i])) return false;
    yb += y[i] * lp.constraints[i].rhs;
  }
  RationalVector g = TransposeTimes(lp, y);
  Rational box_min = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g[j] == 0) continue;
    VariableBounds b = lp.BoundsOf(j);
    const std::optional<Rational>& bound = g[j] > 0 ? b.lower : b.upper;
    if (!bound) return false;
    box_min += g[j] * *bound;
  }
  return box_min > yb;
}

bool CheckUnboundedRay(const LinearProgram& lp, std::span<const Rational> ray) {
  if (ray.size() != lp.variable_count()) return false;
  for (const LinearConstraint& c : lp.constraints) {
    if (!Satisfies(Dot(c.coefficients, ray), c.relation, Rational(0))) {
      return false;
    }
  }
  for (std::size_t j = 0; j < ray.size(); ++j) {
    VariableBounds b = lp.BoundsOf(j);
    if (b.lower && ray[j] < 0) return false;
    if (b.upper && ray[j] > 0) return false;
  }
  const Rational gain = Dot(lp.objective, ray);
  return lp.sense == Sense::kMaximize ? gain > 0 : gain < 0;
}

std::optional<RationalVector> FindConvexCombination(
    const RationalMatrix& points, std::span<const Rational> target) {
  if (points.empty()) return std::nullopt;
  const std::size_t k = points.size();
  const std::size_t dim = target.size();
  LinearProgram lp;
  lp.objective.assign(k, 0);
  lp.AddConstraint(RationalVector(k, 1), Relation::kEqual, 1);
  for (std::size_t i = 0; i < dim; ++i) {
    RationalVector row(k);
    for (std::size_t p = 0; p < k; ++p) {
      if (points[p].size() != dim) {
        throw DimensionMismatch("convex combination point dimension");
      }
      row[p] = points[p][i];
    }
    lp.AddConstraint(std::move(row), Relation::kEqual, target[i]);
  }
  LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) return std::nullopt;
  return sol.primal;
}

}  // namespace robust_ftap
