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

#ifndef ROBUST_FTAP_MINIMAX_H_
#define ROBUST_FTAP_MINIMAX_H_

#include <variant>
#include <vector>

#include "robust_ftap/lp.h"
#include "robust_ftap/rational.h"

namespace robust_ftap {

// conv(points).
struct VertexPolytope {
  RationalMatrix points;
};

// {y : constraints hold, bounds hold}. Must be bounded.
struct ConstraintPolytope {
  std::vector<LinearConstraint> constraints;
  std::vector<VariableBounds> bounds;  // one per coordinate
};

using Polytope = std::variant<VertexPolytope, ConstraintPolytope>;

std::size_t PolytopeDimension(const Polytope& polytope);

// f(x, y) = y^T payoff x with x ranging over `x_set` (given by vertices)
// and y over `y_set`. payoff has one row per y coordinate and one column per
// x coordinate.
struct MinimaxInstance {
  RationalMatrix payoff;
  VertexPolytope x_set;
  Polytope y_set;
};

struct MinimaxResult {
  Rational value;
  RationalVector x_star;
  RationalVector x_weights;  // over x_set.points
  RationalVector y_star;
  // Over the y vertices when y_set is a VertexPolytope, empty otherwise.
  RationalVector y_weights;
};

// sup_x inf_y f and inf_y sup_x f, each computed by its own LP. The
// outer-max side dualizes the inner minimization over y; the outer-min side
// maximizes over the x vertices directly. Both values are required to agree
// exactly before returning (InternalError otherwise). Throws EmptyPolytope
// if either set is empty and InvalidInput if y_set is unbounded.
MinimaxResult MinimaxValue(const MinimaxInstance& instance);

// Evaluates y^T payoff x.
Rational BilinearValue(const RationalMatrix& payoff, std::span<const Rational> x,
                       std::span<const Rational> y);

}  // namespace robust_ftap

#endif  // ROBUST_FTAP_MINIMAX_H_
