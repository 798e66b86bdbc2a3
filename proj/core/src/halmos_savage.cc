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

#include "robust_ftap/halmos_savage.h"

#include <algorithm>
#include <vector>

#include "robust_ftap/errors.h"
#include "robust_ftap/lp.h"

namespace robust_ftap {

const char* DSetKindName(DSetKind kind) {
  return kind == DSetKind::kPrimal ? "primal" : "dual";
}

namespace {

void RequireDominated(const AmbiguitySet& p_family, const AmbiguitySet& q_family) {
  if (p_family.outcome_count() != q_family.outcome_count()) {
    throw DimensionMismatch("P and Q live on different sample spaces");
  }
  for (std::size_t k = 0; k < q_family.vertex_count(); ++k) {
    if (!DominatedBy(q_family.vertex(k), p_family)) {
      throw InvalidInput("Q vertex " + std::to_string(k) +
                         " charges a polar set of P");
    }
  }
}

std::vector<const RationalVector*> Masses(const AmbiguitySet& family) {
  std::vector<const RationalVector*> out;
  for (const ProbabilityMeasure& v : family.vertices()) out.push_back(&v.masses());
  return out;
}

Rational MaxOf(std::span<const Rational> values) {
  return *std::max_element(values.begin(), values.end());
}

Rational MinOf(std::span<const Rational> values) {
  return *std::min_element(values.begin(), values.end());
}

struct Extremum {
  bool found = false;
  SubsetMask mask = 0;
  Rational value;
  std::uint64_t count = 0;

  // Keeps the best value; ties go to the smaller mask.
  void Offer(SubsetMask m, const Rational& v, bool prefer_smaller) {
    ++count;
    const bool better = !found || (prefer_smaller ? v < value : v > value) ||
                        (v == value && m < mask);
    if (better) {
      found = true;
      mask = m;
      value = v;
    }
  }
};

enum class Aggregate { kMax, kMin };

// Scans events A. `premise` selects qualifying events from the P side; the
// Q-side aggregate of each qualifying event is offered to the extremum.
template <typename Premise>
Extremum Scan(const AmbiguitySet& p_family, const AmbiguitySet& q_family,
              const OutcomeSet& support, int cap, Aggregate p_agg,
              Aggregate q_agg, bool prefer_smaller, Premise&& premise) {
  std::vector<const RationalVector*> measures = Masses(p_family);
  const std::size_t np = measures.size();
  for (const RationalVector* q : Masses(q_family)) measures.push_back(q);
  Extremum best;
  ForEachSubset(support, measures, cap,
                [&](SubsetMask mask, std::span<const Rational> sums) {
                  auto p_side = sums.subspan(0, np);
                  auto q_side = sums.subspan(np);
                  Rational p_value =
                      p_agg == Aggregate::kMax ? MaxOf(p_side) : MinOf(p_side);
                  if (!premise(p_value, q_side)) return;
                  Rational q_value =
                      q_agg == Aggregate::kMax ? MaxOf(q_side) : MinOf(q_side);
                  best.Offer(mask, q_value, prefer_smaller);
                });
  return best;
}

void RequireMember(const AmbiguitySet& family, const ProbabilityMeasure& p) {
  if (p.size() != family.outcome_count()) {
    throw DimensionMismatch("measure and family on different spaces");
  }
  RationalMatrix points;
  for (const ProbabilityMeasure& v : family.vertices()) points.push_back(v.masses());
  if (!FindConvexCombination(points, p.masses())) {
    throw InvalidInput("measure is not a member of the P polytope");
  }
}

RationalVector Restrict(std::span<const Rational> full, const OutcomeSet& support) {
  RationalVector out;
  out.reserve(support.size());
  for (std::size_t i : support) out.push_back(full[i]);
  return out;
}

RationalVector Expand(std::span<const Rational> restricted,
                      const OutcomeSet& support, std::size_t size) {
  RationalVector out(size, 0);
  for (std::size_t k = 0; k < support.size(); ++k) out[support[k]] = restricted[k];
  return out;
}

MinimaxInstance DSetGame(const HsInstance& instance, const DSet& d) {
  const std::size_t s = d.support.size();
  MinimaxInstance game;
  for (const ProbabilityMeasure& q : instance.q_family().vertices()) {
    game.x_set.points.push_back(Restrict(q.masses(), d.support));
  }
  // E_Q[h] for the primal set, -E_Q[h] for the dual one so that the inner
  // optimization over h is always an infimum.
  const Rational diagonal = d.kind == DSetKind::kPrimal ? 1 : -1;
  game.payoff.assign(s, RationalVector(s, 0));
  for (std::size_t i = 0; i < s; ++i) game.payoff[i][i] = diagonal;
  game.y_set = d.AsPolytope();
  return game;
}

RationalVector UnitWeights(std::size_t count) {
  RationalVector w(count, 0);
  w[0] = 1;
  return w;
}

}  // namespace

HsInstance::HsInstance(AmbiguitySet p_family, AmbiguitySet q_family,
                       Rational epsilon, Rational delta)
    : p_family_(std::move(p_family)),
      q_family_(std::move(q_family)),
      epsilon_(std::move(epsilon)),
      delta_(std::move(delta)) {
  RequireDominated(p_family_, q_family_);
  if (epsilon_ <= 0) throw InvalidInput("epsilon must be positive");
  if (delta_ <= 0) throw InvalidInput("delta must be positive");
  support_ = p_family_.QuasiSureSupport();
}

HypothesisCheck CheckHypothesisPrimal(const HsInstance& instance, int cap) {
  const Rational& eps = instance.epsilon();
  Extremum worst = Scan(instance.p_family(), instance.q_family(),
                        instance.support(), cap, Aggregate::kMax,
                        Aggregate::kMax, /*prefer_smaller=*/true,
                        [&](const Rational& p_max, auto) { return p_max >= eps; });
  HypothesisCheck check;
  check.qualifying_sets = worst.count;
  if (worst.found) {
    check.worst_set = MaskToOutcomes(worst.mask, instance.support());
    check.worst_value = worst.value;
    check.holds = worst.value >= instance.delta();
  }
  return check;
}

HypothesisCheck CheckHypothesisDual(const HsInstance& instance, int cap) {
  const Rational& delta = instance.delta();
  Extremum worst = Scan(instance.p_family(), instance.q_family(),
                        instance.support(), cap, Aggregate::kMin,
                        Aggregate::kMin, /*prefer_smaller=*/false,
                        [&](const Rational& p_min, auto) { return p_min < delta; });
  HypothesisCheck check;
  check.qualifying_sets = worst.count;
  if (worst.found) {
    check.worst_set = MaskToOutcomes(worst.mask, instance.support());
    check.worst_value = worst.value;
    check.holds = worst.value < instance.epsilon();
  }
  return check;
}

ConstraintPolytope DSet::AsPolytope() const {
  ConstraintPolytope polytope;
  polytope.bounds.assign(support.size(), VariableBounds::Box(0, 1));
  polytope.constraints.push_back(
      {Restrict(p.masses(), support),
       kind == DSetKind::kPrimal ? Relation::kGreaterEqual : Relation::kLessEqual,
       threshold});
  return polytope;
}

bool DSet::Contains(std::span<const Rational> h) const {
  for (std::size_t i : support) {
    if (h[i] < 0 || h[i] > 1) return false;
  }
  Rational expectation = 0;
  for (std::size_t i : support) expectation += p[i] * h[i];
  return kind == DSetKind::kPrimal ? expectation >= threshold
                                   : expectation <= threshold;
}

DSet MakeDSet(DSetKind kind, const HsInstance& instance,
              const ProbabilityMeasure& p) {
  RequireMember(instance.p_family(), p);
  Rational threshold = kind == DSetKind::kPrimal
                           ? Rational(2 * instance.epsilon())
                           : Rational(instance.epsilon() * instance.delta());
  return DSet{kind, p, std::move(threshold), instance.support()};
}

BasicLemmaResult BasicLemmaValue(const HsInstance& instance,
                                 const ProbabilityMeasure& p, DSetKind kind) {
  DSet d = MakeDSet(kind, instance, p);
  MinimaxResult saddle = MinimaxValue(DSetGame(instance, d));
  const std::size_t n = p.size();
  Rational value = kind == DSetKind::kPrimal ? saddle.value : Rational(-saddle.value);
  return BasicLemmaResult{std::move(value), Expand(saddle.y_star, d.support, n),
                          saddle.x_weights,
                          instance.q_family().Mixture(saddle.x_weights)};
}

HsWitness ConstructHsWitness(const HsInstance& instance,
                             const ProbabilityMeasure& p, int cap) {
  HypothesisCheck check = CheckHypothesisPrimal(instance, cap);
  if (!check.holds) {
    throw HypothesisViolated("an event with P-mass >= epsilon has Q-mass " +
                             FormatRational(check.worst_value) + " < delta");
  }
  DSet d = MakeDSet(DSetKind::kPrimal, instance, p);
  const Rational& eps = instance.epsilon();
  const Rational& delta = instance.delta();
  HsWitness witness{DSetKind::kPrimal, p, instance.q_family().vertex(0),
                    UnitWeights(instance.q_family().vertex_count()), 1, true};
  if (d.threshold > 1) {
    // No event has probability >= 2 epsilon > 1.
    return witness;
  }
  MinimaxResult saddle = MinimaxValue(DSetGame(instance, d));
  witness.vacuous = false;
  witness.q_weights = saddle.x_weights;
  witness.q_star = instance.q_family().Mixture(saddle.x_weights);
  witness.guaranteed_bound = saddle.value;
  const Rational required = eps * delta / 2;
  if (witness.guaranteed_bound < required) {
    throw BoundViolated("sup-inf value " + FormatRational(saddle.value) +
                        " is below epsilon*delta/2 = " + FormatRational(required));
  }
  std::string why;
  if (!VerifyHsWitness(instance, witness, cap, &why)) throw BoundViolated(why);
  return witness;
}

HsWitness ConstructDualHsWitness(const HsInstance& instance,
                                 const ProbabilityMeasure& p, int cap) {
  HypothesisCheck check = CheckHypothesisDual(instance, cap);
  if (!check.holds) {
    throw HypothesisViolated("an event with P-mass < delta has Q-mass " +
                             FormatRational(check.worst_value) + " >= epsilon");
  }
  DSet d = MakeDSet(DSetKind::kDual, instance, p);
  const Rational& eps = instance.epsilon();
  HsWitness witness{DSetKind::kDual, p, instance.q_family().vertex(0),
                    UnitWeights(instance.q_family().vertex_count()), 1, true};
  if (eps >= 1) {
    // Q(A) <= 1 < 2 epsilon for every event.
    return witness;
  }
  MinimaxResult saddle = MinimaxValue(DSetGame(instance, d));
  witness.vacuous = false;
  witness.q_weights = saddle.x_weights;
  witness.q_star = instance.q_family().Mixture(saddle.x_weights);
  witness.guaranteed_bound = -saddle.value;
  const Rational ceiling = (2 - eps) * eps;
  if (witness.guaranteed_bound > ceiling) {
    throw BoundViolated("inf-sup value " + FormatRational(witness.guaranteed_bound) +
                        " exceeds (2-epsilon)*epsilon = " + FormatRational(ceiling));
  }
  std::string why;
  if (!VerifyHsWitness(instance, witness, cap, &why)) throw BoundViolated(why);
  return witness;
}

bool VerifyHsWitness(const HsInstance& instance, const HsWitness& witness,
                     int cap, std::string* why) {
  auto fail = [why](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (witness.q_weights.size() != instance.q_family().vertex_count()) {
    return fail("mixture weights do not match Q vertex count");
  }
  Rational total = 0;
  for (const Rational& w : witness.q_weights) {
    if (w < 0) return fail("negative mixture weight");
    total += w;
  }
  if (total != 1) return fail("mixture weights do not sum to 1");
  if (instance.q_family().Mixture(witness.q_weights) != witness.q_star) {
    return fail("Q* differs from the stated mixture");
  }
  const Rational& eps = instance.epsilon();
  const Rational& delta = instance.delta();
  const std::vector<const RationalVector*> measures = {&witness.for_p.masses(),
                                                       &witness.q_star.masses()};
  bool ok = true;
  std::string failure;
  ForEachSubset(instance.support(), measures, cap,
                [&](SubsetMask mask, std::span<const Rational> sums) {
                  if (!ok) return;
                  const Rational& p_mass = sums[0];
                  const Rational& q_mass = sums[1];
                  if (witness.kind == DSetKind::kPrimal) {
                    if (p_mass < 2 * eps) return;
                    if (q_mass < witness.guaranteed_bound || 2 * q_mass < eps * delta) {
                      ok = false;
                      failure = "event mask " + std::to_string(mask) +
                                " has Q*-mass " + FormatRational(q_mass);
                    }
                  } else {
                    if (p_mass >= eps * delta) return;
                    if (q_mass >= 2 * eps || q_mass > witness.guaranteed_bound) {
                      ok = false;
                      failure = "event mask " + std::to_string(mask) +
                                " has Q*-mass " + FormatRational(q_mass);
                    }
                  }
                });
  if (!ok) return fail(failure);
  return true;
}

ModulusResult HsModulus(const AmbiguitySet& p_family,
                        const AmbiguitySet& q_family, const Rational& epsilon,
                        int cap) {
  RequireDominated(p_family, q_family);
  const OutcomeSet support = p_family.QuasiSureSupport();
  Extremum worst = Scan(p_family, q_family, support, cap, Aggregate::kMax,
                        Aggregate::kMax, /*prefer_smaller=*/true,
                        [&](const Rational& p_max, auto) { return p_max >= epsilon; });
  if (!worst.found) return {ModulusSentinel(), std::nullopt};
  return {worst.value, MaskToOutcomes(worst.mask, support)};
}

ModulusResult DualHsModulus(const AmbiguitySet& p_family,
                            const AmbiguitySet& q_family,
                            const Rational& epsilon, int cap) {
  RequireDominated(p_family, q_family);
  const OutcomeSet support = p_family.QuasiSureSupport();
  // Swap roles: events are selected by min_Q Q(A) >= epsilon and scored by
  // min_P P(A).
  Extremum worst = Scan(q_family, p_family, support, cap, Aggregate::kMin,
                        Aggregate::kMin, /*prefer_smaller=*/true,
                        [&](const Rational& q_min, auto) { return q_min >= epsilon; });
  if (!worst.found) return {ModulusSentinel(), std::nullopt};
  return {worst.value, MaskToOutcomes(worst.mask, support)};
}

}  // namespace robust_ftap
