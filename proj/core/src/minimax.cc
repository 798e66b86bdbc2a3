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

#include "robust_ftap/minimax.h"

#include <string>

#include "robust_ftap/errors.h"

namespace robust_ftap {

std::size_t PolytopeDimension(const Polytope& polytope) {
  if (const auto* v = std::get_if<VertexPolytope>(&polytope)) {
    return v->points.empty() ? 0 : v->points.front().size();
  }
  return std::get<ConstraintPolytope>(polytope).bounds.size();
}

Rational BilinearValue(const RationalMatrix& payoff, std::span<const Rational> x,
                       std::span<const Rational> y) {
  Rational total = 0;
  for (std::size_t r = 0; r < payoff.size(); ++r) {
    if (y[r] == 0) continue;
    total += y[r] * Dot(payoff[r], x);
  }
  return total;
}

namespace {

// payoff * x.
RationalVector Apply(const RationalMatrix& payoff, std::span<const Rational> x) {
  RationalVector out(payoff.size());
  for (std::size_t r = 0; r < payoff.size(); ++r) out[r] = Dot(payoff[r], x);
  return out;
}

// payoff^T * y.
RationalVector ApplyTransposed(const RationalMatrix& payoff,
                               std::span<const Rational> y, std::size_t cols) {
  RationalVector out(cols, 0);
  for (std::size_t r = 0; r < payoff.size(); ++r) {
    if (y[r] == 0) continue;
    for (std::size_t c = 0; c < cols; ++c) out[c] += y[r] * payoff[r][c];
  }
  return out;
}

void Validate(const MinimaxInstance& inst) {
  if (inst.x_set.points.empty()) throw EmptyPolytope("x polytope has no vertices");
  const std::size_t n = inst.x_set.points.front().size();
  for (const RationalVector& p : inst.x_set.points) {
    if (p.size() != n) throw DimensionMismatch("x vertices of mixed dimension");
  }
  const std::size_t m = PolytopeDimension(inst.y_set);
  if (inst.payoff.size() != m) {
    throw DimensionMismatch("payoff has " + std::to_string(inst.payoff.size()) +
                            " rows but the y polytope has dimension " +
                            std::to_string(m));
  }
  for (const RationalVector& row : inst.payoff) {
    if (row.size() != n) throw DimensionMismatch("payoff column count");
  }
  if (const auto* yv = std::get_if<VertexPolytope>(&inst.y_set)) {
    if (yv->points.empty()) throw EmptyPolytope("y polytope has no vertices");
    for (const RationalVector& p : yv->points) {
      if (p.size() != m) throw DimensionMismatch("y vertices of mixed dimension");
    }
  } else {
    const auto& yc = std::get<ConstraintPolytope>(inst.y_set);
    for (const LinearConstraint& c : yc.constraints) {
      if (c.coefficients.size() != m) throw DimensionMismatch("y constraint width");
    }
  }
}

// inf over y of max over x vertices of f.
//   min t  s.t.  t >= f(v_k, y) for every x vertex v_k,  y in Y.
// Variables: y (or vertex weights mu of Y) followed by t.
void SolveOuterMin(const MinimaxInstance& inst, MinimaxResult* result,
                   Rational* value) {
  const auto& xs = inst.x_set.points;
  const std::size_t m = inst.payoff.size();
  LinearProgram lp;
  lp.sense = Sense::kMinimize;

  if (const auto* yv = std::get_if<VertexPolytope>(&inst.y_set)) {
    const std::size_t w = yv->points.size();
    lp.objective.assign(w + 1, 0);
    lp.objective[w] = 1;
    lp.bounds.assign(w + 1, VariableBounds::NonNegative());
    lp.bounds[w] = VariableBounds::Free();
    for (const RationalVector& v : xs) {
      RationalVector bx = Apply(inst.payoff, v);
      RationalVector row(w + 1);
      for (std::size_t j = 0; j < w; ++j) row[j] = -Dot(yv->points[j], bx);
      row[w] = 1;
      lp.AddConstraint(std::move(row), Relation::kGreaterEqual, 0);
    }
    RationalVector simplex_row(w + 1, 1);
    simplex_row[w] = 0;
    lp.AddConstraint(std::move(simplex_row), Relation::kEqual, 1);
    LpSolution sol = SolveLp(lp);
    if (sol.status != LpStatus::kOptimal) {
      throw InternalError("outer-min LP over y vertices not optimal");
    }
    result->y_weights.assign(sol.primal.begin(), sol.primal.begin() + w);
    result->y_star.assign(m, 0);
    for (std::size_t j = 0; j < w; ++j) {
      if (result->y_weights[j] == 0) continue;
      for (std::size_t r = 0; r < m; ++r) {
        result->y_star[r] += result->y_weights[j] * yv->points[j][r];
      }
    }
    *value = sol.value;
    return;
  }

  const auto& yc = std::get<ConstraintPolytope>(inst.y_set);
  lp.objective.assign(m + 1, 0);
  lp.objective[m] = 1;
  lp.bounds = yc.bounds;
  lp.bounds.push_back(VariableBounds::Free());
  for (const RationalVector& v : xs) {
    RationalVector bx = Apply(inst.payoff, v);
    RationalVector row(m + 1);
    for (std::size_t r = 0; r < m; ++r) row[r] = -bx[r];
    row[m] = 1;
    lp.AddConstraint(std::move(row), Relation::kGreaterEqual, 0);
  }
  for (const LinearConstraint& c : yc.constraints) {
    RationalVector row = c.coefficients;
    row.push_back(0);
    lp.AddConstraint(std::move(row), c.relation, c.rhs);
  }
  LpSolution sol = SolveLp(lp);
  if (sol.status == LpStatus::kInfeasible) {
    throw EmptyPolytope("y constraint polytope is empty");
  }
  if (sol.status == LpStatus::kUnbounded) {
    throw InvalidInput("y polytope is unbounded");
  }
  result->y_star.assign(sol.primal.begin(), sol.primal.begin() + m);
  *value = sol.value;
}

// sup over x = sum_k lambda_k v_k of inf over y of f. With Y given by rows
// G_i y (rel) h_i (bounds turned into rows), the inner problem
//   min (Bx).y
// has dual  max h.z  s.t.  G^T z = Bx,  z_i >= 0 on >= rows, <= 0 on <= rows.
void SolveOuterMax(const MinimaxInstance& inst, MinimaxResult* result,
                   Rational* value) {
  const auto& xs = inst.x_set.points;
  const std::size_t k = xs.size();
  const std::size_t n = xs.front().size();
  const std::size_t m = inst.payoff.size();
  LinearProgram lp;
  lp.sense = Sense::kMaximize;

  if (const auto* yv = std::get_if<VertexPolytope>(&inst.y_set)) {
    // max s  s.t.  s <= f(x, w_j) for each y vertex w_j.
    lp.objective.assign(k + 1, 0);
    lp.objective[k] = 1;
    lp.bounds.assign(k + 1, VariableBounds::NonNegative());
    lp.bounds[k] = VariableBounds::Free();
    for (const RationalVector& w : yv->points) {
      RationalVector btw = ApplyTransposed(inst.payoff, w, n);
      RationalVector row(k + 1);
      for (std::size_t p = 0; p < k; ++p) row[p] = -Dot(btw, xs[p]);
      row[k] = 1;
      lp.AddConstraint(std::move(row), Relation::kLessEqual, 0);
    }
  } else {
    const auto& yc = std::get<ConstraintPolytope>(inst.y_set);
    std::vector<LinearConstraint> rows = yc.constraints;
    for (std::size_t r = 0; r < m; ++r) {
      const VariableBounds& b = yc.bounds[r];
      RationalVector unit(m, 0);
      unit[r] = 1;
      if (b.lower) rows.push_back({unit, Relation::kGreaterEqual, *b.lower});
      if (b.upper) rows.push_back({unit, Relation::kLessEqual, *b.upper});
    }
    const std::size_t z = rows.size();
    lp.objective.assign(k + z, 0);
    lp.bounds.assign(k + z, VariableBounds::NonNegative());
    for (std::size_t i = 0; i < z; ++i) {
      lp.objective[k + i] = rows[i].rhs;
      switch (rows[i].relation) {
        case Relation::kGreaterEqual:
          lp.bounds[k + i] = VariableBounds::NonNegative();
          break;
        case Relation::kLessEqual:
          lp.bounds[k + i] = {std::nullopt, Rational(0)};
          break;
        case Relation::kEqual:
          lp.bounds[k + i] = VariableBounds::Free();
          break;
      }
    }
    // sum_i z_i G_i[r] - sum_p lambda_p (B v_p)[r] = 0 for every y coordinate.
    std::vector<RationalVector> bv;
    for (const RationalVector& v : xs) bv.push_back(Apply(inst.payoff, v));
    for (std::size_t r = 0; r < m; ++r) {
      RationalVector row(k + z, 0);
      for (std::size_t p = 0; p < k; ++p) row[p] = -bv[p][r];
      for (std::size_t i = 0; i < z; ++i) row[k + i] = rows[i].coefficients[r];
      lp.AddConstraint(std::move(row), Relation::kEqual, 0);
    }
  }
  RationalVector simplex_row(lp.variable_count(), 0);
  for (std::size_t p = 0; p < k; ++p) simplex_row[p] = 1;
  lp.AddConstraint(std::move(simplex_row), Relation::kEqual, 1);

  LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw InternalError(std::string("outer-max LP ended ") +
                        LpStatusName(sol.status));
  }
  result->x_weights.assign(sol.primal.begin(), sol.primal.begin() + k);
  result->x_star.assign(n, 0);
  for (std::size_t p = 0; p < k; ++p) {
    if (result->x_weights[p] == 0) continue;
    for (std::size_t c = 0; c < n; ++c) {
      result->x_star[c] += result->x_weights[p] * xs[p][c];
    }
  }
  *value = sol.value;
}

// Coordinates without two finite bounds are probed with one LP per side.
void RequireBounded(const ConstraintPolytope& y) {
  const std::size_t m = y.bounds.size();
  for (std::size_t j = 0; j < m; ++j) {
    for (Sense sense : {Sense::kMaximize, Sense::kMinimize}) {
      const VariableBounds& b = y.bounds[j];
      if (sense == Sense::kMaximize ? b.upper.has_value() : b.lower.has_value()) continue;
      LinearProgram lp;
      lp.sense = sense;
      lp.objective.assign(m, 0);
      lp.objective[j] = 1;
      lp.constraints = y.constraints;
      lp.bounds = y.bounds;
      if (SolveLp(lp).status == LpStatus::kUnbounded) {
        throw InvalidInput("y polytope is unbounded in coordinate " + std::to_string(j));
      }
    }
  }
}

}  // namespace

MinimaxResult MinimaxValue(const MinimaxInstance& instance) {
  Validate(instance);
  if (const auto* y = std::get_if<ConstraintPolytope>(&instance.y_set)) RequireBounded(*y);
  MinimaxResult result;
  Rational inf_sup;
  Rational sup_inf;
  SolveOuterMin(instance, &result, &inf_sup);
  SolveOuterMax(instance, &result, &sup_inf);
  if (inf_sup != sup_inf) {
    throw InternalError("minimax exchange failed: inf-sup " +
                        FormatRational(inf_sup) + " != sup-inf " +
                        FormatRational(sup_inf));
  }
  result.value = inf_sup;
  return result;
}

}  // namespace robust_ftap
