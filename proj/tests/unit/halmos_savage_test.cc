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
#include "robust_ftap/halmos_savage.h"
#include "test_util.h"

namespace robust_ftap {
namespace {

using testing::Family;
using testing::M;
using testing::R;
using testing::V;

HsInstance M1Pair(const char* eps = "1/2", const char* delta = "1/3") {
  return HsInstance(Family({M({"1", "0"}), M({"0", "1"})}), Family({M({"1/3", "2/3"})}),
                    R(eps), R(delta));
}

TEST(HsInstanceTest, RequiresDominationAndPositiveThresholds) {
  EXPECT_THROW(HsInstance(Family({M({"1", "0"})}), Family({M({"1/2", "1/2"})}), R("1/2"),
                          R("1/2")),
               InvalidInput);
  EXPECT_THROW(M1Pair("0", "1/2"), InvalidInput);
  EXPECT_THROW(M1Pair("1/2", "-1"), InvalidInput);
}

TEST(HypothesisTest, PrimalHoldsOnM1Pair) {
  HypothesisCheck c = CheckHypothesisPrimal(M1Pair());
  EXPECT_TRUE(c.holds);
  ASSERT_TRUE(c.worst_set.has_value());
  EXPECT_EQ(*c.worst_set, (OutcomeSet{0}));
  EXPECT_EQ(c.worst_value, R("1/3"));
  EXPECT_EQ(c.qualifying_sets, 3u);
}

TEST(HypothesisTest, PrimalSingletonExamples) {
  HsInstance ok(Family({M({"1/2", "1/2"})}), Family({M({"9/10", "1/10"})}), R("2/5"),
                R("1/10"));
  HypothesisCheck c = CheckHypothesisPrimal(ok);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(*c.worst_set, (OutcomeSet{1}));

  HsInstance bad(Family({M({"1/2", "1/2"})}), Family({M({"1", "0"})}), R("2/5"),
                 R("1/100"));
  c = CheckHypothesisPrimal(bad);
  EXPECT_FALSE(c.holds);
  EXPECT_EQ(*c.worst_set, (OutcomeSet{1}));
  EXPECT_EQ(c.worst_value, 0);
}

TEST(HypothesisTest, DualExamples) {
  HsInstance only_empty(Family({M({"1/2", "1/2"})}),
                        Family({M({"9/10", "1/10"}), M({"1/10", "9/10"})}), R("3/20"),
                        R("2/5"));
  HypothesisCheck c = CheckHypothesisDual(only_empty);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.qualifying_sets, 1u);
  EXPECT_EQ(*c.worst_set, OutcomeSet{});

  HsInstance fails(Family({M({"1/2", "1/2"})}), Family({M({"1", "0"})}), R("1/2"), R("3/5"));
  c = CheckHypothesisDual(fails);
  EXPECT_FALSE(c.holds);
  EXPECT_EQ(c.qualifying_sets, 3u);
  EXPECT_EQ(*c.worst_set, (OutcomeSet{0}));
  EXPECT_EQ(c.worst_value, 1);
}

TEST(HypothesisTest, QContainingPHoldsForEqualThresholds) {
  AmbiguitySet p = Family({M({"1/2", "1/4", "1/4"}), M({"0", "1/2", "1/2"})});
  AmbiguitySet q = Family({M({"1/2", "1/4", "1/4"}), M({"0", "1/2", "1/2"}), M({"1", "0", "0"})});
  for (const char* e : {"1/10", "1/3", "1/2", "3/4"}) {
    HsInstance inst(p, q, R(e), R(e));
    EXPECT_TRUE(CheckHypothesisPrimal(inst).holds) << e;
    EXPECT_TRUE(CheckHypothesisDual(inst).holds) << e;
  }
}

TEST(HypothesisTest, EnumerationCapIsEnforced) {
  RationalVector m(21, Rational(1, 21));
  HsInstance inst(AmbiguitySet({ProbabilityMeasure(m)}), AmbiguitySet({ProbabilityMeasure(m)}),
                  R("1/2"), R("1/2"));
  EXPECT_THROW(CheckHypothesisPrimal(inst), EnumerationCapExceeded);
  EXPECT_THROW(CheckHypothesisDual(inst, 3), EnumerationCapExceeded);
}

TEST(BasicLemmaTest, SingletonQ) {
  HsInstance inst(Family({M({"1/2", "1/2"})}), Family({M({"9/10", "1/10"})}), R("1/4"),
                  R("1/10"));
  BasicLemmaResult r = BasicLemmaValue(inst, M({"1/2", "1/2"}), DSetKind::kPrimal);
  EXPECT_EQ(r.value, R("1/10"));
  EXPECT_EQ(r.optimal_h, V({"0", "1"}));
}

TEST(BasicLemmaTest, QEqualsP) {
  HsInstance inst(Family({M({"1/2", "1/2"})}), Family({M({"1/2", "1/2"})}), R("1/4"),
                  R("1/2"));
  EXPECT_EQ(BasicLemmaValue(inst, M({"1/2", "1/2"}), DSetKind::kPrimal).value, R("1/2"));
}

// With every Dirac on supp(P) in Q, sup_Q E_Q[h] is max h, so the continuous
// optimum is the constant 2 epsilon while indicators can do no better than 1.
TEST(BasicLemmaTest, AllDiracsSeparatesContinuousAndIndicatorOptima) {
  ProbabilityMeasure p = M({"1/2", "1/3", "1/6"});
  HsInstance inst(Family({p}),
                  Family({M({"1", "0", "0"}), M({"0", "1", "0"}), M({"0", "0", "1"})}),
                  R("1/5"), R("1/2"));
  BasicLemmaResult r = BasicLemmaValue(inst, p, DSetKind::kPrimal);
  EXPECT_EQ(r.value, R("2/5"));
  EXPECT_EQ(r.optimal_h, V({"2/5", "2/5", "2/5"}));
  // Indicator oracle: every admissible nonempty A has max_Q Q(A) = 1.
  Rational best = 2;
  for (unsigned mask = 1; mask < 8; ++mask) {
    OutcomeSet a;
    for (std::size_t i = 0; i < 3; ++i) if (mask >> i & 1u) a.push_back(i);
    if (p.Probability(a) >= R("2/5")) best = std::min(best, Rational(1));
  }
  EXPECT_EQ(best, 1);
  EXPECT_GE(best, r.value);
}

TEST(BasicLemmaTest, EmptyPrimalDSetIsReported) {
  HsInstance inst = M1Pair("3/5", "1/3");
  EXPECT_THROW(BasicLemmaValue(inst, M({"1", "0"}), DSetKind::kPrimal), EmptyPolytope);
}

TEST(BasicLemmaTest, RejectsMeasuresOutsideP) {
  HsInstance inst(Family({M({"1/2", "1/2"})}), Family({M({"1/2", "1/2"})}), R("1/4"),
                  R("1/2"));
  EXPECT_THROW(BasicLemmaValue(inst, M({"1", "0"}), DSetKind::kPrimal), InvalidInput);
}

TEST(HsWitnessTest, M1PairAtTheFirstVertex) {
  HsInstance inst = M1Pair();
  HsWitness w = ConstructHsWitness(inst, M({"1", "0"}));
  EXPECT_EQ(w.q_star, M({"1/3", "2/3"}));
  EXPECT_GE(w.guaranteed_bound, R("1/12"));
  EXPECT_EQ(w.guaranteed_bound, R("1/3"));
  EXPECT_FALSE(w.vacuous);
  EXPECT_TRUE(VerifyHsWitness(inst, w));
}

// With Q = P the primal hypothesis holds at delta = epsilon, not at 1.
TEST(HsWitnessTest, QEqualsP) {
  ProbabilityMeasure p = M({"1/4", "1/4", "1/2"});
  for (const char* e : {"1/10", "1/4", "1/2"}) {
    HsInstance unit_delta(Family({p}), Family({p}), R(e), 1);
    EXPECT_FALSE(CheckHypothesisPrimal(unit_delta).holds);
    HsInstance inst(Family({p}), Family({p}), R(e), R(e));
    HsWitness w = ConstructHsWitness(inst, p);
    EXPECT_EQ(w.q_star, p);
    EXPECT_EQ(w.guaranteed_bound, 2 * R(e));
  }
}

TEST(HsWitnessTest, VacuousWhenTwoEpsilonExceedsOne) {
  HsInstance inst = M1Pair("3/5", "1/3");
  HsWitness w = ConstructHsWitness(inst, M({"1", "0"}));
  EXPECT_TRUE(w.vacuous);
  EXPECT_TRUE(VerifyHsWitness(inst, w));
}

TEST(HsWitnessTest, HypothesisFailureIsReported) {
  HsInstance bad(Family({M({"1/2", "1/2"})}), Family({M({"1", "0"})}), R("2/5"), R("1/100"));
  EXPECT_THROW(ConstructHsWitness(bad, M({"1/2", "1/2"})), HypothesisViolated);
  HsInstance dual_bad(Family({M({"1/2", "1/2"})}), Family({M({"1", "0"})}), R("1/2"),
                      R("3/5"));
  EXPECT_THROW(ConstructDualHsWitness(dual_bad, M({"1/2", "1/2"})), HypothesisViolated);
}

TEST(HsWitnessTest, DualOnlyEmptySetQualifies) {
  HsInstance inst(Family({M({"1/2", "1/2"})}),
                  Family({M({"9/10", "1/10"}), M({"1/10", "9/10"})}), R("3/20"), R("2/5"));
  HsWitness w = ConstructDualHsWitness(inst, M({"1/2", "1/2"}));
  EXPECT_TRUE(VerifyHsWitness(inst, w));
  // sup over h1 + h2 <= 3/25 of E_Q[h] is (3/25) max(q1, q2).
  EXPECT_EQ(w.guaranteed_bound, R("3/50"));
}

TEST(HsWitnessTest, DualQEqualsP) {
  ProbabilityMeasure p = M({"1/5", "3/10", "1/2"});
  // Omega has P-mass 1 < 3/2 but Q-mass 1 >= 1/4.
  EXPECT_FALSE(CheckHypothesisDual(HsInstance(Family({p}), Family({p}), R("1/4"), R("3/2"))).holds);
  HsInstance inst(Family({p}), Family({p}), R("1/4"), R("1/4"));
  HsWitness w = ConstructDualHsWitness(inst, p);
  EXPECT_EQ(w.q_star, p);
  EXPECT_TRUE(VerifyHsWitness(inst, w));
}

TEST(HsWitnessTest, BoundFormulas) {
  EXPECT_EQ(R("1/10") * R("1/5") / 2, R("1/100"));
  EXPECT_EQ((2 - R("1/10")) * R("1/10"), R("19/100"));
}

TEST(HsWitnessTest, VerifierRejectsTamperedWitness) {
  HsInstance inst = M1Pair();
  HsWitness w = ConstructHsWitness(inst, M({"1", "0"}));
  w.guaranteed_bound = R("1/2");
  std::string why;
  EXPECT_FALSE(VerifyHsWitness(inst, w, kDefaultEnumerationCap, &why));
  w = ConstructHsWitness(inst, M({"1", "0"}));
  w.q_weights = V({"1/2"});
  EXPECT_FALSE(VerifyHsWitness(inst, w));
}

TEST(HsModulusTest, Examples) {
  AmbiguitySet p = Family({M({"1", "0"}), M({"0", "1"})});
  ModulusResult r = HsModulus(p, Family({M({"1/3", "2/3"})}), R("1/2"));
  EXPECT_EQ(r.delta, R("1/3"));
  EXPECT_EQ(*r.worst_set, (OutcomeSet{0}));
  EXPECT_EQ(HsModulus(Family({M({"1/2", "1/2"})}), Family({M({"1", "0"})}), R("1/4")).delta, 0);
  ModulusResult none = HsModulus(Family({M({"1/2", "1/2"})}), Family({M({"1/2", "1/2"})}), R("3/2"));
  EXPECT_TRUE(none.unconstrained());
  EXPECT_FALSE(none.worst_set.has_value());
}

TEST(HsModulusTest, QEqualsPDominatesEpsilon) {
  AmbiguitySet p = Family({M({"1/2", "1/4", "1/4"}), M({"1/8", "1/8", "3/4"})});
  for (const char* e : {"1/10", "1/5", "1/3", "1/2", "9/10"}) {
    EXPECT_GE(HsModulus(p, p, R(e)).delta, R(e));
  }
}

TEST(DualHsModulusTest, IsTheLargestWorkingDelta) {
  AmbiguitySet p = Family({M({"1/2", "1/2"})});
  AmbiguitySet q = Family({M({"1", "0"})});
  // Only A = {w1} and A = Omega have Q(A) >= 1/2; min P over them is 1/2.
  ModulusResult r = DualHsModulus(p, q, R("1/2"));
  EXPECT_EQ(r.delta, R("1/2"));
  EXPECT_TRUE(CheckHypothesisDual(HsInstance(p, q, R("1/2"), R("1/2"))).holds);
  EXPECT_FALSE(CheckHypothesisDual(HsInstance(p, q, R("1/2"), R("51/100"))).holds);
}

// Random families for the property tests.
struct Generator {
  std::mt19937 rng;
  explicit Generator(unsigned seed) : rng(seed) {}

  ProbabilityMeasure Measure(std::size_t n, const OutcomeSet& allowed) {
    std::uniform_int_distribution<int> w(0, 4);
    RationalVector m(n, 0);
    Rational total = 0;
    for (std::size_t i : allowed) {
      m[i] = w(rng);
      total += m[i];
    }
    if (total == 0) {
      m[allowed[0]] = 1;
      total = 1;
    }
    for (auto& x : m) x /= total;
    return ProbabilityMeasure(m);
  }

  AmbiguitySet FamilyOn(std::size_t n, const OutcomeSet& allowed, int count) {
    std::vector<ProbabilityMeasure> v;
    for (int k = 0; k < count; ++k) v.push_back(Measure(n, allowed));
    return AmbiguitySet(v);
  }
};

TEST(HalmosSavagePropertyTest, WitnessesAndLemmaBoundsOnRandomInstances) {
  Generator gen(17);
  const Rational grid[] = {Rational(1, 10), Rational(1, 5), Rational(3, 10), Rational(2, 5),
                           Rational(1, 2)};
  int primal_checked = 0, dual_checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + trial % 5;
    OutcomeSet all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    AmbiguitySet p = gen.FamilyOn(n, all, 1 + trial % 3);
    AmbiguitySet q = gen.FamilyOn(n, p.QuasiSureSupport(), 1 + (trial / 3) % 3);
    const Rational& eps = grid[trial % 5];
    const Rational& delta = grid[(trial / 5) % 5];
    HsInstance inst(p, q, eps, delta);
    const ProbabilityMeasure& vertex = p.vertex(0);

    // Primal hypothesis: monotonicity of the modulus and the lemma bound.
    EXPECT_LE(HsModulus(p, q, eps / 2).delta, HsModulus(p, q, eps).delta);
    if (CheckHypothesisPrimal(inst).holds) {
      ++primal_checked;
      if (2 * eps <= 1) {
        BasicLemmaResult lemma = BasicLemmaValue(inst, vertex, DSetKind::kPrimal);
        EXPECT_GE(lemma.value, eps * delta);
        // Saddle oracle: Q* is a best response to h* and vice versa.
        DSet d = MakeDSet(DSetKind::kPrimal, inst, vertex);
        EXPECT_TRUE(d.Contains(lemma.optimal_h));
        for (const auto& qv : q.vertices()) {
          EXPECT_LE(qv.Expectation(lemma.optimal_h), lemma.value);
        }
      }
      HsWitness w = ConstructHsWitness(inst, vertex);
      EXPECT_TRUE(VerifyHsWitness(inst, w));
      EXPECT_GE(w.guaranteed_bound, eps * delta / 2);
    }
    if (CheckHypothesisDual(inst).holds) {
      ++dual_checked;
      BasicLemmaResult lemma = BasicLemmaValue(inst, vertex, DSetKind::kDual);
      EXPECT_LE(lemma.value, 2 * eps);
      HsWitness w = ConstructDualHsWitness(inst, vertex);
      EXPECT_TRUE(VerifyHsWitness(inst, w));
    }
  }
  EXPECT_GT(primal_checked, 20);
  EXPECT_GT(dual_checked, 20);
}

}  // namespace
}  // namespace robust_ftap
