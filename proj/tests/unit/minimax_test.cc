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

#include <random>

#include <gtest/gtest.h>

#include "robust_ftap/errors.h"
#include "robust_ftap/minimax.h"
#include "test_util.h"

namespace robust_ftap {
namespace {

using testing::R;
using testing::V;

VertexPolytope Simplex(std::size_t n) {
  VertexPolytope p;
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector e(n, 0);
    e[i] = 1;
    p.points.push_back(e);
  }
  return p;
}

TEST(MinimaxTest, MatchingPenniesHasValueZero) {
  MinimaxInstance game{{V({"1", "-1"}), V({"-1", "1"})}, Simplex(2), Simplex(2)};
  MinimaxResult r = MinimaxValue(game);
  EXPECT_EQ(r.value, 0);
  EXPECT_EQ(r.x_star, V({"1/2", "1/2"}));
  EXPECT_EQ(r.y_star, V({"1/2", "1/2"}));
}

TEST(MinimaxTest, SinglePointXReducesToInnerMinimum) {
  RationalMatrix b = {V({"2", "1"}), V({"-1", "3"}), V({"0", "1/2"})};
  MinimaxInstance game{b, VertexPolytope{{V({"1/3", "2/3"})}}, Simplex(3)};
  // Rows give 4/3, 5/3, 1/3.
  EXPECT_EQ(MinimaxValue(game).value, R("1/3"));
}

TEST(MinimaxTest, DSetGameFromTheBasicLemma) {
  ConstraintPolytope d;
  d.bounds.assign(2, VariableBounds::Box(0, 1));
  d.constraints.push_back({V({"1/2", "1/2"}), Relation::kGreaterEqual, R("1/2")});
  MinimaxInstance game{{V({"1", "0"}), V({"0", "1"})},
                       VertexPolytope{{V({"9/10", "1/10"}), V({"1/10", "9/10"})}},
                       d};
  MinimaxResult r = MinimaxValue(game);
  EXPECT_EQ(r.value, R("1/2"));
  EXPECT_EQ(r.y_star, V({"1/2", "1/2"}));
  EXPECT_EQ(r.x_star, V({"1/2", "1/2"}));
  EXPECT_EQ(r.x_weights, V({"1/2", "1/2"}));
}

TEST(MinimaxTest, EmptyAndUnboundedSetsAreRejected) {
  ConstraintPolytope empty;
  empty.bounds.assign(1, VariableBounds::Box(0, 1));
  empty.constraints.push_back({V({"1"}), Relation::kGreaterEqual, 2});
  EXPECT_THROW(MinimaxValue({{V({"1"})}, Simplex(1), empty}), EmptyPolytope);
  EXPECT_THROW(MinimaxValue({{V({"1"})}, VertexPolytope{}, Simplex(1)}), EmptyPolytope);

  ConstraintPolytope ray;
  ray.bounds = {VariableBounds::NonNegative()};
  EXPECT_THROW(MinimaxValue({{V({"1"})}, Simplex(1), ray}), InvalidInput);
  EXPECT_THROW(MinimaxValue({{V({"-1"})}, Simplex(1), ray}), InvalidInput);
}

// Independent oracle: the inner best responses to the reported strategies,
// computed by a plain LP over Y and a maximum over the X vertices.
Rational BestResponseOverY(const RationalMatrix& b, const RationalVector& x,
                           const Polytope& y_set) {
  RationalVector costs(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) costs[i] = Dot(b[i], x);
  if (const auto* v = std::get_if<VertexPolytope>(&y_set)) {
    Rational best = Dot(costs, v->points[0]);
    for (const auto& y : v->points) best = std::min(best, Dot(costs, y));
    return best;
  }
  const auto& c = std::get<ConstraintPolytope>(y_set);
  LinearProgram lp;
  lp.sense = Sense::kMinimize;
  lp.objective = costs;
  lp.constraints = c.constraints;
  lp.bounds = c.bounds;
  LpSolution sol = SolveLp(lp);
  EXPECT_EQ(sol.status, LpStatus::kOptimal);
  return sol.value;
}

TEST(MinimaxTest, SaddlePointsOnRandomInstances) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 10), small(0, 10);
  auto entry = [&] {
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nx = 1 + trial % 6, ny = 1 + (trial / 6) % 6;
    RationalMatrix b(ny, RationalVector(nx));
    for (auto& row : b) for (auto& v : row) v = entry();
    VertexPolytope x_set;
    for (int k = 0; k < 1 + trial % 4; ++k) {
      RationalVector p(nx);
      for (auto& v : p) v = testing::Q(small(rng), 10);
      x_set.points.push_back(p);
    }
    Polytope y_set;
    if (trial % 2 == 0) {
      y_set = Simplex(ny);
    } else {
      ConstraintPolytope c;
      c.bounds.assign(ny, VariableBounds::Box(-1, 1));
      RationalVector row(ny);
      for (auto& v : row) v = entry();
      c.constraints.push_back({row, Relation::kLessEqual, 1});
      y_set = c;
    }
    MinimaxResult r = MinimaxValue({b, x_set, y_set});
    EXPECT_EQ(BilinearValue(b, r.x_star, r.y_star), r.value);
    EXPECT_EQ(BestResponseOverY(b, r.x_star, y_set), r.value);
    Rational best_x = BilinearValue(b, x_set.points[0], r.y_star);
    for (const auto& x : x_set.points) best_x = std::max(best_x, BilinearValue(b, x, r.y_star));
    EXPECT_EQ(best_x, r.value);
  }
}

}  // namespace
}  // namespace robust_ftap
