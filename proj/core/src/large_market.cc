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

#include "robust_ftap/large_market.h"

#include <algorithm>
#include <functional>

#include "robust_ftap/errors.h"
#include "robust_ftap/lp.h"

namespace robust_ftap {

MarketSequence::MarketSequence(std::vector<Market> markets,
                               std::vector<std::optional<int>> caps)
    : markets_(std::move(markets)), caps_(std::move(caps)) {
  if (!caps_.empty() && caps_.size() != markets_.size()) {
    throw DimensionMismatch("one cap override per market expected");
  }
  for (std::size_t n = 0; n < markets_.size(); ++n) {
    if (!CheckNa(markets_[n]).holds) {
      throw NaViolated("market " + std::to_string(n + 1) + " admits an arbitrage");
    }
  }
}

int MarketSequence::CapFor(std::size_t index, int fallback) const {
  if (index < caps_.size() && caps_[index]) return *caps_[index];
  return fallback;
}

std::vector<Rational> DefaultAlphaGrid() {
  return {Rational(1, 10), Rational(1, 5), Rational(3, 10), Rational(2, 5),
          Rational(1, 2)};
}

std::vector<Rational> DefaultCSchedule(std::size_t count) {
  std::vector<Rational> out;
  for (std::size_t k = 1; k <= count; ++k) out.emplace_back(1, k);
  return out;
}

std::vector<Rational> DefaultTargetLevels(std::size_t count) {
  std::vector<Rational> out;
  for (std::size_t k = 1; k <= count; ++k) out.push_back(1 - Rational(1, k + 1));
  return out;
}

namespace {

Rational ProbabilityOfLevel(const ProbabilityMeasure& p, const RationalVector& gains,
                            const Rational& alpha) {
  Rational mass = 0;
  for (std::size_t w = 0; w < gains.size(); ++w) {
    if (gains[w] >= alpha) mass += p[w];
  }
  return mass;
}

// First event (by increasing mask) with max_P P(A) >= threshold that admits
// H in [-1,1]^d with gain >= alpha on A and >= -lower on the rest of the
// support.
std::optional<AaStep> FindStep(const Market& market, std::size_t index,
                               const Rational& alpha, const Rational& threshold,
                               const Rational& lower, int cap) {
  const OutcomeSet& support = market.support();
  std::vector<const RationalVector*> measures;
  for (const ProbabilityMeasure& p : market.priors().vertices()) {
    measures.push_back(&p.masses());
  }
  std::vector<SubsetMask> candidates;
  ForEachSubset(support, measures, cap,
                [&](SubsetMask mask, std::span<const Rational> sums) {
                  if (mask == 0) return;
                  if (*std::max_element(sums.begin(), sums.end()) >= threshold) {
                    candidates.push_back(mask);
                  }
                });
  std::sort(candidates.begin(), candidates.end());
  const std::size_t d = market.asset_count();
  for (SubsetMask mask : candidates) {
    OutcomeSet event = MaskToOutcomes(mask, support);
    LinearProgram lp;
    lp.objective.assign(d, 0);
    lp.bounds.assign(d, VariableBounds::Box(-1, 1));
    for (std::size_t w : support) {
      const RationalVector& row = market.increments()[w];
      const bool inside = std::binary_search(event.begin(), event.end(), w);
      if (inside) {
        for (std::size_t i = 0; i < d; ++i) lp.objective[i] += row[i];
      }
      lp.AddConstraint(row, Relation::kGreaterEqual,
                       inside ? alpha : Rational(-lower));
    }
    LpSolution sol = SolveLp(lp);
    if (sol.status != LpStatus::kOptimal) continue;
    std::size_t best = 0;
    Rational best_mass = -1;
    for (std::size_t k = 0; k < market.priors().vertex_count(); ++k) {
      Rational mass = market.priors().vertex(k).Probability(event);
      if (mass > best_mass) {
        best_mass = mass;
        best = k;
      }
    }
    RationalVector weights(market.priors().vertex_count(), 0);
    weights[best] = 1;
    const ProbabilityMeasure& prior = market.priors().vertex(best);
    Rational probability = ProbabilityOfLevel(prior, market.Gains(sol.primal), alpha);
    return AaStep{index, sol.primal, std::move(event), std::move(weights), prior,
                  lower, std::move(probability), Rational(0)};
  }
  return std::nullopt;
}

enum class AaKind { kFirst, kSecond };

std::optional<AaWitness> Scan(const MarketSequence& sequence,
                              std::vector<Rational> alpha_grid,
                              const std::vector<Rational>& schedule, AaKind kind,
                              int cap) {
  for (const Rational& alpha : alpha_grid) {
    if (alpha <= 0) throw InvalidInput("alpha must be positive");
  }
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (schedule[k] <= 0) throw InvalidInput("schedule entries must be positive");
    if (kind == AaKind::kFirst && k > 0 && schedule[k] > schedule[k - 1]) {
      throw InvalidInput("c schedule must be nonincreasing");
    }
    if (kind == AaKind::kSecond && schedule[k] > 1) {
      throw InvalidInput("target levels must not exceed 1");
    }
  }
  if (sequence.empty() || schedule.empty()) return std::nullopt;
  std::sort(alpha_grid.begin(), alpha_grid.end(), std::greater<>());
  alpha_grid.erase(std::unique(alpha_grid.begin(), alpha_grid.end()), alpha_grid.end());
  for (const Rational& alpha : alpha_grid) {
    AaWitness witness{alpha, {}};
    std::size_t next = 0;
    for (const Rational& level : schedule) {
      const Rational threshold = kind == AaKind::kFirst ? alpha : level;
      const Rational lower = kind == AaKind::kFirst ? level : Rational(1);
      std::optional<AaStep> found;
      for (; next < sequence.size() && !found; ++next) {
        found = FindStep(sequence.market(next), next, alpha, threshold, lower,
                         sequence.CapFor(next, cap));
      }
      if (!found) break;
      found->level = level;
      witness.steps.push_back(std::move(*found));
    }
    if (witness.steps.size() == schedule.size()) return witness;
  }
  return std::nullopt;
}

bool VerifyAa(const MarketSequence& sequence, const AaWitness& witness,
              AaKind kind, std::string* why) {
  auto fail = [why](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (witness.alpha <= 0) return fail("alpha is not positive");
  if (witness.steps.empty()) return fail("witness has no steps");
  for (std::size_t k = 0; k < witness.steps.size(); ++k) {
    const AaStep& step = witness.steps[k];
    const std::string at = "step " + std::to_string(k + 1) + ": ";
    if (step.market_index >= sequence.size()) return fail(at + "no such market");
    if (k > 0 && step.market_index <= witness.steps[k - 1].market_index) {
      return fail(at + "market indices are not increasing");
    }
    const Market& market = sequence.market(step.market_index);
    if (step.h.size() != market.asset_count()) return fail(at + "H has wrong length");
    if (step.prior_weights.size() != market.priors().vertex_count()) {
      return fail(at + "prior weights do not match the vertex count");
    }
    Rational total = 0;
    for (const Rational& w : step.prior_weights) {
      if (w < 0) return fail(at + "negative prior weight");
      total += w;
    }
    if (total != 1) return fail(at + "prior weights do not sum to 1");
    if (market.priors().Mixture(step.prior_weights) != step.prior) {
      return fail(at + "P^k differs from its mixture");
    }
    if (kind == AaKind::kFirst) {
      if (step.lower_bound <= 0) return fail(at + "c_k is not positive");
      if (k > 0 && step.lower_bound > witness.steps[k - 1].lower_bound) {
        return fail(at + "c_k increased");
      }
    } else if (step.lower_bound != 1) {
      return fail(at + "lower bound must be 1");
    }
    const RationalVector gains = market.Gains(step.h);
    for (std::size_t w : market.support()) {
      if (gains[w] < -step.lower_bound) {
        return fail(at + "gain below -c at outcome " + market.space().label(w));
      }
    }
    if (ProbabilityOfLevel(step.prior, gains, witness.alpha) != step.probability) {
      return fail(at + "stored probability is wrong");
    }
    const Rational& needed = kind == AaKind::kFirst ? witness.alpha : step.level;
    if (step.probability < needed) return fail(at + "probability below the level");
  }
  return true;
}

}  // namespace

std::optional<AaWitness> ScanAa1(const MarketSequence& sequence,
                                 std::vector<Rational> alpha_grid,
                                 const std::vector<Rational>& c_schedule, int cap) {
  std::optional<AaWitness> witness =
      Scan(sequence, std::move(alpha_grid), c_schedule, AaKind::kFirst, cap);
  if (!witness) return witness;
  std::string why;
  if (!VerifyAa1Witness(sequence, *witness, &why)) throw BoundViolated(why);
  // E_Q[X] = 0 and X >= -c force Q(X >= alpha) <= c / alpha.
  for (const AaStep& step : witness->steps) {
    const Market& market = sequence.market(step.market_index);
    Rational mass = MaxMartingaleMass(market, step, witness->alpha,
                                      sequence.CapFor(step.market_index, cap));
    if (mass * witness->alpha > step.lower_bound) {
      throw BoundViolated("martingale measure puts " + FormatRational(mass) +
                          " on {X >= alpha} in market " +
                          std::to_string(step.market_index + 1));
    }
  }
  return witness;
}

std::optional<AaWitness> ScanAa2(const MarketSequence& sequence,
                                 std::vector<Rational> alpha_grid,
                                 const std::vector<Rational>& target_levels,
                                 int cap) {
  std::optional<AaWitness> witness =
      Scan(sequence, std::move(alpha_grid), target_levels, AaKind::kSecond, cap);
  if (!witness) return witness;
  std::string why;
  if (!VerifyAa2Witness(sequence, *witness, &why)) throw BoundViolated(why);
  return witness;
}

bool VerifyAa1Witness(const MarketSequence& sequence, const AaWitness& witness,
                      std::string* why) {
  return VerifyAa(sequence, witness, AaKind::kFirst, why);
}

bool VerifyAa2Witness(const MarketSequence& sequence, const AaWitness& witness,
                      std::string* why) {
  return VerifyAa(sequence, witness, AaKind::kSecond, why);
}

Rational MaxMartingaleMass(const Market& market, const AaStep& step,
                           const Rational& alpha, int cap) {
  MartingalePolytope polytope = ComputeMartingalePolytope(market, cap);
  const RationalVector gains = market.Gains(step.h);
  Rational best = 0;
  for (const ProbabilityMeasure& q : polytope.vertices) {
    best = std::max(best, ProbabilityOfLevel(q, gains, alpha));
  }
  return best;
}

bool ModulusTable::certified() const {
  return std::all_of(uniform_delta.begin(), uniform_delta.end(),
                     [](const Rational& d) { return d > 0; });
}

AmbiguitySet MartingaleFamily(const Market& market, int cap) {
  return ComputeMartingalePolytope(market, cap).AsAmbiguitySet();
}

ModulusTable CertifyModuli(const MarketSequence& sequence,
                           const std::vector<Rational>& epsilon_grid,
                           DSetKind kind, int cap) {
  for (const Rational& eps : epsilon_grid) {
    if (eps <= 0) throw InvalidInput("epsilon must be positive");
  }
  ModulusTable table{kind, epsilon_grid, {},
                     std::vector<Rational>(epsilon_grid.size(), ModulusSentinel())};
  for (std::size_t n = 0; n < sequence.size(); ++n) {
    const Market& market = sequence.market(n);
    const int market_cap = sequence.CapFor(n, cap);
    AmbiguitySet q_family = MartingaleFamily(market, market_cap);
    std::vector<Rational> row;
    for (std::size_t j = 0; j < epsilon_grid.size(); ++j) {
      ModulusResult r =
          kind == DSetKind::kPrimal
              ? HsModulus(market.priors(), q_family, epsilon_grid[j], market_cap)
              : DualHsModulus(market.priors(), q_family, epsilon_grid[j], market_cap);
      table.uniform_delta[j] = std::min(table.uniform_delta[j], r.delta);
      row.push_back(std::move(r.delta));
    }
    table.per_market.push_back(std::move(row));
  }
  return table;
}

ProbabilityMeasure MixGeometric(const std::vector<ProbabilityMeasure>& components) {
  if (components.empty()) throw InvalidInput("no components to mix");
  const std::size_t n = components.size();
  const Rational scale = 1 / (1 - Rational(1, mpz_class(1) << n));
  RationalVector masses(components[0].size(), 0);
  for (std::size_t m = 1; m <= n; ++m) {
    const ProbabilityMeasure& q = components[m - 1];
    if (q.size() != masses.size()) throw DimensionMismatch("component sizes differ");
    const Rational weight = scale * Rational(1, mpz_class(1) << m);
    for (std::size_t w = 0; w < masses.size(); ++w) masses[w] += weight * q[w];
  }
  return ProbabilityMeasure(std::move(masses));
}

namespace {

const ProbabilityMeasure& PriorFor(const MarketSequence& sequence,
                                   const std::vector<ProbabilityMeasure>& priors,
                                   std::size_t n) {
  if (!priors.empty() && priors.size() != sequence.size()) {
    throw DimensionMismatch("one prior per market expected");
  }
  return priors.empty() ? sequence.market(n).priors().vertex(0) : priors[n];
}

}  // namespace

ContiguousSequence BuildContiguousSequence(
    const MarketSequence& sequence, const std::vector<ProbabilityMeasure>& priors,
    int cap) {
  ContiguousSequence out;
  const std::size_t count = sequence.size();
  for (std::size_t m = 1; m <= count; ++m) out.epsilons.emplace_back(1, m);
  ModulusTable table = CertifyModuli(sequence, out.epsilons, DSetKind::kPrimal, cap);
  for (std::size_t j = 0; j < count; ++j) {
    const Rational& delta = table.uniform_delta[j];
    if (delta <= 0) {
      throw HypothesisViolated("no positive delta at epsilon = " +
                               FormatRational(out.epsilons[j]));
    }
    out.deltas.push_back(std::min(delta, Rational(1)));
  }
  for (std::size_t n = 0; n < count; ++n) {
    const Market& market = sequence.market(n);
    const int market_cap = sequence.CapFor(n, cap);
    AmbiguitySet q_family = MartingaleFamily(market, market_cap);
    ContiguousEntry entry{PriorFor(sequence, priors, n), {}, market.priors().vertex(0)};
    const std::size_t horizon = n + 1;
    const Rational scale = 1 / (1 - Rational(1, mpz_class(1) << horizon));
    std::vector<ProbabilityMeasure> components;
    for (std::size_t m = 1; m <= horizon; ++m) {
      HsInstance instance(market.priors(), q_family, out.epsilons[m - 1],
                          out.deltas[m - 1]);
      HsWitness witness = ConstructHsWitness(instance, entry.prior, market_cap);
      components.push_back(witness.q_star);
      entry.components.push_back({out.epsilons[m - 1], out.deltas[m - 1],
                                  scale * Rational(1, mpz_class(1) << m),
                                  std::move(witness)});
    }
    entry.q = MixGeometric(components);
    out.entries.push_back(std::move(entry));
  }
  std::string why;
  if (!VerifyContiguousSequence(sequence, out, cap, &why)) throw BoundViolated(why);
  return out;
}

bool VerifyContiguousSequence(const MarketSequence& sequence,
                              const ContiguousSequence& contiguous, int cap,
                              std::string* why) {
  auto fail = [why](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (contiguous.entries.size() != sequence.size()) return fail("entry count");
  if (contiguous.epsilons.size() != sequence.size() ||
      contiguous.deltas.size() != sequence.size()) {
    return fail("schedule length");
  }
  for (std::size_t n = 0; n < sequence.size(); ++n) {
    const Market& market = sequence.market(n);
    const ContiguousEntry& entry = contiguous.entries[n];
    const std::string at = "market " + std::to_string(n + 1) + ": ";
    if (entry.components.size() != n + 1) return fail(at + "component count");
    Rational total = 0;
    RationalVector mixed(market.outcome_count(), 0);
    for (const ContiguousComponent& c : entry.components) {
      total += c.weight;
      if (c.witness.q_star.size() != mixed.size()) return fail(at + "component size");
      for (std::size_t w = 0; w < mixed.size(); ++w) mixed[w] += c.weight * c.witness.q_star[w];
      if (!IsMartingaleMeasure(market, c.witness.q_star)) {
        return fail(at + "component is not a martingale measure");
      }
    }
    if (total != 1) return fail(at + "mixture weights sum to " + FormatRational(total));
    if (mixed != entry.q.masses()) return fail(at + "Q^n differs from its mixture");
    if (!IsMartingaleMeasure(market, entry.q)) {
      return fail(at + "Q^n is not a martingale measure");
    }
    const std::vector<const RationalVector*> measures = {&entry.prior.masses(),
                                                         &entry.q.masses()};
    std::string failure;
    ForEachSubset(market.support(), measures, sequence.CapFor(n, cap),
                  [&](SubsetMask mask, std::span<const Rational> sums) {
                    if (!failure.empty()) return;
                    for (std::size_t m = 1; m <= n + 1; ++m) {
                      const Rational& eps = contiguous.epsilons[m - 1];
                      if (sums[0] < 2 * eps) continue;
                      const Rational beta = eps * contiguous.deltas[m - 1] / 2 /
                                            Rational(mpz_class(1) << m);
                      if (sums[1] < beta) {
                        failure = at + "event mask " + std::to_string(mask) +
                                  " breaks the bound for m = " + std::to_string(m);
                        return;
                      }
                    }
                  });
    if (!failure.empty()) return fail(failure);
  }
  return true;
}

namespace {

WeakContiguityWitness TryWeakContiguity(const MarketSequence& sequence,
                                        const Rational& epsilon,
                                        const Rational& inner_epsilon,
                                        const std::vector<ProbabilityMeasure>& priors,
                                        int cap) {
  WeakContiguityWitness out{epsilon, inner_epsilon, 1, 1, {}, {}};
  std::vector<AmbiguitySet> families;
  for (std::size_t n = 0; n < sequence.size(); ++n) {
    const Market& market = sequence.market(n);
    const int market_cap = sequence.CapFor(n, cap);
    families.push_back(MartingaleFamily(market, market_cap));
    ModulusResult r =
        DualHsModulus(market.priors(), families.back(), inner_epsilon, market_cap);
    out.inner_delta = std::min(out.inner_delta, r.delta);
  }
  if (out.inner_delta <= 0) {
    throw HypothesisViolated("dual modulus vanishes at epsilon' = " +
                             FormatRational(inner_epsilon));
  }
  out.delta = std::min(Rational(inner_epsilon * out.inner_delta), Rational(1));
  for (std::size_t n = 0; n < sequence.size(); ++n) {
    const Market& market = sequence.market(n);
    HsInstance instance(market.priors(), families[n], inner_epsilon, out.inner_delta);
    out.priors.push_back(PriorFor(sequence, priors, n));
    out.per_market.push_back(
        ConstructDualHsWitness(instance, out.priors.back(), sequence.CapFor(n, cap)));
  }
  return out;
}

}  // namespace

WeakContiguityWitness BuildWeakContiguityWitness(
    const MarketSequence& sequence, const Rational& epsilon,
    const std::vector<ProbabilityMeasure>& priors, int cap) {
  if (epsilon <= 0) throw InvalidInput("epsilon must be positive");
  std::string why;
  WeakContiguityWitness out =
      TryWeakContiguity(sequence, epsilon, epsilon / 2, priors, cap);
  if (VerifyWeakContiguity(sequence, out, cap, &why)) return out;
  out = TryWeakContiguity(sequence, epsilon, epsilon / 4, priors, cap);
  if (VerifyWeakContiguity(sequence, out, cap, &why)) return out;
  throw BoundViolated(why);
}

bool VerifyWeakContiguity(const MarketSequence& sequence,
                          const WeakContiguityWitness& witness, int cap,
                          std::string* why) {
  auto fail = [why](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (witness.per_market.size() != sequence.size() ||
      witness.priors.size() != sequence.size()) {
    return fail("one witness per market expected");
  }
  if (witness.delta <= 0) return fail("delta is not positive");
  for (std::size_t n = 0; n < sequence.size(); ++n) {
    const Market& market = sequence.market(n);
    const HsWitness& w = witness.per_market[n];
    const std::string at = "market " + std::to_string(n + 1) + ": ";
    if (!IsMartingaleMeasure(market, w.q_star)) {
      return fail(at + "Q is not a martingale measure");
    }
    if (w.for_p != witness.priors[n]) return fail(at + "witness built for another P");
    const std::vector<const RationalVector*> measures = {&witness.priors[n].masses(),
                                                         &w.q_star.masses()};
    std::string failure;
    ForEachSubset(market.support(), measures, sequence.CapFor(n, cap),
                  [&](SubsetMask mask, std::span<const Rational> sums) {
                    if (!failure.empty()) return;
                    if (sums[0] < witness.delta && sums[1] >= witness.epsilon) {
                      failure = at + "event mask " + std::to_string(mask) +
                                " has Q-mass " + FormatRational(sums[1]);
                    }
                  });
    if (!failure.empty()) return fail(failure);
  }
  return true;
}

}  // namespace robust_ftap
