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

#ifndef ROBUST_FTAP_MARKET_H_
#define ROBUST_FTAP_MARKET_H_

#include <optional>
#include <string>
#include <vector>

#include "robust_ftap/lp.h"
#include "robust_ftap/measures.h"
#include "robust_ftap/rational.h"
#include "robust_ftap/subsets.h"

namespace robust_ftap {

// One-period market: d assets with deterministic prices S0 and random prices
// S1(omega), under a polytope of priors.
class Market {
 public:
  // Throws DimensionMismatch on inconsistent shapes.
  Market(SampleSpace space, RationalVector s0, RationalMatrix s1,
         AmbiguitySet priors);

  const SampleSpace& space() const { return space_; }
  std::size_t outcome_count() const { return space_.size(); }
  std::size_t asset_count() const { return s0_.size(); }
  const RationalVector& s0() const { return s0_; }
  const RationalMatrix& s1() const { return s1_; }
  const AmbiguitySet& priors() const { return priors_; }
  const OutcomeSet& support() const { return support_; }

  // S1(omega) - S0, one row per outcome.
  const RationalMatrix& increments() const { return increments_; }

  // H . (S1(omega) - S0).
  Rational Gain(std::span<const Rational> h, std::size_t omega) const;
  RationalVector Gains(std::span<const Rational> h) const;

 private:
  SampleSpace space_;
  RationalVector s0_;
  RationalMatrix s1_;
  AmbiguitySet priors_;
  OutcomeSet support_;
  RationalMatrix increments_;
};

struct ArbitrageWitness {
  RationalVector h;
  std::size_t strict_outcome = 0;
};

bool VerifyArbitrage(const Market& market, const ArbitrageWitness& witness,
                     std::string* why = nullptr);

struct NaResult {
  bool holds = true;
  std::optional<ArbitrageWitness> witness;
};

// Searches H in [-1,1]^d for a q.s. nonnegative gain that is positive at
// some support outcome.
NaResult CheckNa(const Market& market);

// Arbitrage whose strict outcome lies in `candidates`, if any.
std::optional<ArbitrageWitness> FindArbitrageCharging(const Market& market,
                                                      const OutcomeSet& candidates);

// {q >= 0, sum q = 1, q = 0 off the support, E_q[S1 - S0] = 0}.
struct MartingalePolytope {
  OutcomeSet support;
  std::vector<ProbabilityMeasure> vertices;

  bool empty() const { return vertices.empty(); }
  AmbiguitySet AsAmbiguitySet() const;
};

bool IsMartingaleMeasure(const Market& market, const ProbabilityMeasure& q);

// A martingale measure charging every outcome of the quasi-sure support.
// Exists iff NA holds.
std::optional<ProbabilityMeasure> EquivalentMartingaleMeasure(const Market& market);

// H with H . dS(omega) > 0 on the whole support. Exists iff there is no
// martingale measure.
std::optional<RationalVector> StrictlyPositiveStrategy(const Market& market);

// Vertices by basis enumeration over the support. Throws
// EnumerationCapExceeded if the support is larger than `cap`.
MartingalePolytope ComputeMartingalePolytope(const Market& market,
                                             int cap = kDefaultEnumerationCap);

struct FtapVertexResult {
  ProbabilityMeasure prior;
  // Martingale measure Q with prior << Q, if one exists.
  std::optional<ProbabilityMeasure> dominating_q;
  // Whether that Q is also dominated by the priors (Q <<< P).
  bool q_dominated_by_priors = false;
  // Otherwise an arbitrage with strict outcome in the support of `prior`.
  std::optional<ArbitrageWitness> obstruction;
};

struct FtapResult {
  bool na_holds = true;
  bool all_vertices_dominated = true;
  bool na_equivalent = true;
  std::vector<FtapVertexResult> per_vertex;
};

// Compares CheckNa with the existence of dominating martingale measures.
// Throws InternalError if the two sides disagree.
FtapResult CheckFtap(const Market& market);

struct HedgeCertificate {
  Rational price;
  RationalVector h;
  BoundedFunction payoff;
  ProbabilityMeasure attaining_q;
};

bool VerifyHedge(const Market& market, const HedgeCertificate& hedge,
                 std::string* why = nullptr);

// Minimal superhedging price of `payoff` with a hedge attaining it. Throws
// NaViolated if the market admits arbitrage.
HedgeCertificate Superhedge(const Market& market, const BoundedFunction& payoff,
                            int cap = kDefaultEnumerationCap);

}  // namespace robust_ftap

#endif  // ROBUST_FTAP_MARKET_H_
