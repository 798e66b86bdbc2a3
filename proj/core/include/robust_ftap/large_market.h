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

#ifndef ROBUST_FTAP_LARGE_MARKET_H_
#define ROBUST_FTAP_LARGE_MARKET_H_

#include <optional>
#include <string>
#include <vector>

#include "robust_ftap/halmos_savage.h"
#include "robust_ftap/market.h"

namespace robust_ftap {

// Finite prefix of a sequence of markets. Market n sits at index n - 1.
class MarketSequence {
 public:
  // Throws NaViolated naming the first market that admits an arbitrage.
  // `caps` holds optional per-market enumeration caps.
  explicit MarketSequence(std::vector<Market> markets,
                          std::vector<std::optional<int>> caps = {});

  std::size_t size() const { return markets_.size(); }
  bool empty() const { return markets_.empty(); }
  const Market& market(std::size_t index) const { return markets_.at(index); }
  const std::vector<Market>& markets() const { return markets_; }
  // The per-market cap if set, otherwise `fallback`.
  int CapFor(std::size_t index, int fallback) const;

 private:
  std::vector<Market> markets_;
  std::vector<std::optional<int>> caps_;
};

std::vector<Rational> DefaultAlphaGrid();
// 1/k for k = 1..count.
std::vector<Rational> DefaultCSchedule(std::size_t count);
// 1 - 1/(k+1) for k = 1..count.
std::vector<Rational> DefaultTargetLevels(std::size_t count);

// One slot of an asymptotic-arbitrage witness.
struct AaStep {
  std::size_t market_index = 0;  // zero-based
  RationalVector h;
  OutcomeSet event;               // the set A the LP was solved on
  RationalVector prior_weights;   // P^k over the priors of the market
  ProbabilityMeasure prior;
  Rational lower_bound;           // X^k >= -lower_bound q.s.
  Rational probability;           // P^k(X^k >= alpha)
  Rational level;                 // alpha for AA1, the target level for AA2
};

struct AaWitness {
  Rational alpha;
  std::vector<AaStep> steps;
};

// Greedy scan: alphas from largest to smallest; slot k takes the first
// later market with a set A (max_P P(A) >= alpha) and H in [-1,1]^d with
// X >= alpha on A and X >= -c_k on the rest of the support. A witness needs
// every slot filled.
std::optional<AaWitness> ScanAa1(const MarketSequence& sequence,
                                 std::vector<Rational> alpha_grid,
                                 const std::vector<Rational>& c_schedule,
                                 int cap = kDefaultEnumerationCap);

// Same search with X >= -1 off A and max_P P(A) >= level_k per slot.
std::optional<AaWitness> ScanAa2(const MarketSequence& sequence,
                                 std::vector<Rational> alpha_grid,
                                 const std::vector<Rational>& target_levels,
                                 int cap = kDefaultEnumerationCap);

// Re-checks a witness from its stored data only.
bool VerifyAa1Witness(const MarketSequence& sequence, const AaWitness& witness,
                      std::string* why = nullptr);
bool VerifyAa2Witness(const MarketSequence& sequence, const AaWitness& witness,
                      std::string* why = nullptr);

// max over martingale vertices of Q(X >= alpha) for one step.
Rational MaxMartingaleMass(const Market& market, const AaStep& step,
                           const Rational& alpha, int cap = kDefaultEnumerationCap);

struct ModulusTable {
  DSetKind kind = DSetKind::kPrimal;
  std::vector<Rational> epsilon_grid;
  // per_market[n][j] is the modulus of market n at epsilon_grid[j].
  std::vector<std::vector<Rational>> per_market;
  std::vector<Rational> uniform_delta;

  // uniform_delta > 0 at every grid point.
  bool certified() const;
};

// Martingale polytope of a market as an ambiguity set. Throws
// EmptyMartingalePolytope when there is none.
AmbiguitySet MartingaleFamily(const Market& market, int cap);

ModulusTable CertifyModuli(const MarketSequence& sequence,
                           const std::vector<Rational>& epsilon_grid,
                           DSetKind kind, int cap = kDefaultEnumerationCap);

struct ContiguousComponent {
  Rational epsilon;
  Rational delta;
  Rational weight;  // 2^-m / (1 - 2^-n)
  HsWitness witness;
};

struct ContiguousEntry {
  ProbabilityMeasure prior;
  std::vector<ContiguousComponent> components;  // m = 1..n
  ProbabilityMeasure q;
};

struct ContiguousSequence {
  // (epsilon_m, delta_m) for m = 1..N.
  std::vector<Rational> epsilons;
  std::vector<Rational> deltas;
  std::vector<ContiguousEntry> entries;
};

// (1 / (1 - 2^-n)) sum_{m=1..n} 2^-m q_m with n = components.size().
ProbabilityMeasure MixGeometric(const std::vector<ProbabilityMeasure>& components);

// `priors[n]` picks P^n; when empty the first prior vertex is used. Throws
// HypothesisViolated if some delta_m is not positive.
ContiguousSequence BuildContiguousSequence(
    const MarketSequence& sequence,
    const std::vector<ProbabilityMeasure>& priors = {},
    int cap = kDefaultEnumerationCap);

bool VerifyContiguousSequence(const MarketSequence& sequence,
                              const ContiguousSequence& contiguous,
                              int cap = kDefaultEnumerationCap,
                              std::string* why = nullptr);

struct WeakContiguityWitness {
  Rational epsilon;
  Rational inner_epsilon;  // epsilon' used for the dual witnesses
  Rational inner_delta;    // uniform dual modulus at epsilon', at most 1
  Rational delta;
  std::vector<ProbabilityMeasure> priors;
  std::vector<HsWitness> per_market;
};

// P^n(A) < delta implies Q^n(A) < epsilon for every market and event.
WeakContiguityWitness BuildWeakContiguityWitness(
    const MarketSequence& sequence, const Rational& epsilon,
    const std::vector<ProbabilityMeasure>& priors = {},
    int cap = kDefaultEnumerationCap);

bool VerifyWeakContiguity(const MarketSequence& sequence,
                          const WeakContiguityWitness& witness,
                          int cap = kDefaultEnumerationCap,
                          std::string* why = nullptr);

}  // namespace robust_ftap

#endif  // ROBUST_FTAP_LARGE_MARKET_H_
