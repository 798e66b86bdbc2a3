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

#ifndef ROBUST_FTAP_HALMOS_SAVAGE_H_
#define ROBUST_FTAP_HALMOS_SAVAGE_H_

#include <optional>
#include <string>

#include "robust_ftap/measures.h"
#include "robust_ftap/minimax.h"
#include "robust_ftap/rational.h"
#include "robust_ftap/subsets.h"

namespace robust_ftap {

// A pair of polytopes of probability measures with the dominated family Q
// (every member of Q is absolutely continuous w.r.t. some member of P) and
// the two thresholds of the quantitative statements.
class HsInstance {
 public:
  // Throws InvalidInput if Q is not dominated by P or a threshold is not
  // positive.
  HsInstance(AmbiguitySet p_family, AmbiguitySet q_family, Rational epsilon,
             Rational delta);

  const AmbiguitySet& p_family() const { return p_family_; }
  const AmbiguitySet& q_family() const { return q_family_; }
  const Rational& epsilon() const { return epsilon_; }
  const Rational& delta() const { return delta_; }
  const OutcomeSet& support() const { return support_; }

 private:
  AmbiguitySet p_family_;
  AmbiguitySet q_family_;
  Rational epsilon_;
  Rational delta_;
  OutcomeSet support_;
};

struct HypothesisCheck {
  bool holds = true;
  // Primal: qualifying set with the smallest max_Q Q(A).
  // Dual: qualifying set with the largest min_Q Q(A).
  // Empty optional when no set qualifies.
  std::optional<OutcomeSet> worst_set;
  Rational worst_value;
  std::uint64_t qualifying_sets = 0;
};

// Every A with max_P P(A) >= epsilon has max_Q Q(A) >= delta.
HypothesisCheck CheckHypothesisPrimal(const HsInstance& instance,
                                      int cap = kDefaultEnumerationCap);

// Every A with min_P P(A) < delta has min_Q Q(A) < epsilon.
HypothesisCheck CheckHypothesisDual(const HsInstance& instance,
                                    int cap = kDefaultEnumerationCap);

enum class DSetKind { kPrimal, kDual };

const char* DSetKindName(DSetKind kind);

// {h : 0 <= h <= 1 q.s., E_P[h] >= 2 epsilon} (primal) or
// {h : 0 <= h <= 1 q.s., E_P[h] <= epsilon delta} (dual), with h represented
// by its values on the quasi-sure support.
struct DSet {
  DSetKind kind;
  ProbabilityMeasure p;
  Rational threshold;
  OutcomeSet support;

  ConstraintPolytope AsPolytope() const;
  // `h` is a full-space function; off-support values are ignored.
  bool Contains(std::span<const Rational> h) const;
};

DSet MakeDSet(DSetKind kind, const HsInstance& instance,
              const ProbabilityMeasure& p);

struct BasicLemmaResult {
  Rational value;
  RationalVector optimal_h;  // full space, zero off the quasi-sure support
  RationalVector q_weights;  // over q_family vertices
  ProbabilityMeasure optimal_q;
};

// Primal: inf_{h in D} max_Q E_Q[h]. Dual: sup_{h in D~} min_Q E_Q[h].
// Throws EmptyPolytope when the primal D-set is empty (2 epsilon > 1).
BasicLemmaResult BasicLemmaValue(const HsInstance& instance,
                                 const ProbabilityMeasure& p, DSetKind kind);

struct HsWitness {
  DSetKind kind = DSetKind::kPrimal;
  ProbabilityMeasure for_p;
  ProbabilityMeasure q_star;
  RationalVector q_weights;  // over q_family vertices
  // Primal: lower bound on Q*(A) whenever P(A) >= 2 epsilon.
  // Dual: upper bound on Q*(A) whenever P(A) < epsilon delta.
  Rational guaranteed_bound;
  // True when no event can satisfy the premise, so any Q is a witness.
  bool vacuous = false;
};

// For P in conv(p_family) returns Q* in conv(q_family) with
// Q*(A) >= epsilon delta / 2 whenever P(A) >= 2 epsilon. Throws
// HypothesisViolated if the primal hypothesis fails and BoundViolated if a
// guaranteed inequality does not hold.
HsWitness ConstructHsWitness(const HsInstance& instance,
                             const ProbabilityMeasure& p,
                             int cap = kDefaultEnumerationCap);

// Dual version: Q*(A) < 2 epsilon whenever P(A) < epsilon delta.
HsWitness ConstructDualHsWitness(const HsInstance& instance,
                                 const ProbabilityMeasure& p,
                                 int cap = kDefaultEnumerationCap);

// Exhaustive check over every subset of the quasi-sure support.
bool VerifyHsWitness(const HsInstance& instance, const HsWitness& witness,
                     int cap = kDefaultEnumerationCap,
                     std::string* why = nullptr);

// Returned by the moduli when no event qualifies; no probability reaches it.
inline Rational ModulusSentinel() { return Rational(2); }

struct ModulusResult {
  Rational delta;
  std::optional<OutcomeSet> worst_set;

  bool unconstrained() const { return delta == ModulusSentinel(); }
};

// Largest delta for which the primal hypothesis holds at `epsilon`:
// min over A with max_P P(A) >= epsilon of max_Q Q(A).
ModulusResult HsModulus(const AmbiguitySet& p_family,
                        const AmbiguitySet& q_family, const Rational& epsilon,
                        int cap = kDefaultEnumerationCap);

// Largest delta for which the dual hypothesis holds at `epsilon`:
// min over A with min_Q Q(A) >= epsilon of min_P P(A).
ModulusResult DualHsModulus(const AmbiguitySet& p_family,
                            const AmbiguitySet& q_family,
                            const Rational& epsilon,
                            int cap = kDefaultEnumerationCap);

}  // namespace robust_ftap

#endif  // ROBUST_FTAP_HALMOS_SAVAGE_H_
