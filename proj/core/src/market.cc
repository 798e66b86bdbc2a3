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

#include "robust_ftap/market.h"

#include <algorithm>
#include <functional>

#include "robust_ftap/errors.h"

namespace robust_ftap {

Market::Market(SampleSpace space, RationalVector s0, RationalMatrix s1,
               AmbiguitySet priors)
    : space_(std::move(space)),
      s0_(std::move(s0)),
      s1_(std::move(s1)),
      priors_(std::move(priors)) {
  if (s1_.size() != space_.size()) {
    throw DimensionMismatch("S1 has " + std::to_string(s1_.size()) +
                            " rows for " + std::to_string(space_.size()) +
                            " outcomes");
  }
  if (priors_.outcome_count() != space_.size()) {
    throw DimensionMismatch("prior vertices do not match the outcome count");
  }
  increments_.reserve(s1_.size());
  for (std::size_t w = 0; w < s1_.size(); ++w) {
    if (s1_[w].size() != s0_.size()) {
      throw DimensionMismatch("S1 row " + std::to_string(w) + " has " +
                              std::to_string(s1_[w].size()) + " entries, expected " +
                              std::to_string(s0_.size()));
    }
    RationalVector row(s0_.size());
    for (std::size_t i = 0; i < s0_.size(); ++i) row[i] = s1_[w][i] - s0_[i];
    increments_.push_back(std::move(row));
  }
  support_ = priors_.QuasiSureSupport();
}

Rational Market::Gain(std::span<const Rational> h, std::size_t omega) const {
  return Dot(h, increments_.at(omega));
}

RationalVector Market::Gains(std::span<const Rational> h) const {
  RationalVector out;
  out.reserve(increments_.size());
  for (const RationalVector& row : increments_) out.push_back(Dot(h, row));
  return out;
}

bool VerifyArbitrage(const Market& market, const ArbitrageWitness& witness,
                     std::string* why) {
  auto fail = [why](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (witness.h.size() != market.asset_count()) return fail("H has wrong length");
  const OutcomeSet& support = market.support();
  if (!std::binary_search(support.begin(), support.end(), witness.strict_outcome)) {
    return fail("strict outcome is a polar outcome");
  }
  for (std::size_t w : support) {
    if (market.Gain(witness.h, w) < 0) {
      return fail("gain is negative at outcome " + market.space().label(w));
    }
  }
  if (market.Gain(witness.h, witness.strict_outcome) <= 0) {
    return fail("gain is not positive at the strict outcome");
  }
  return true;
}

std::optional<ArbitrageWitness> FindArbitrageCharging(const Market& market,
                                                      const OutcomeSet& candidates) {
  const std::size_t d = market.asset_count();
  if (d == 0) return std::nullopt;
  const OutcomeSet& support = market.support();
  LinearProgram lp;
  lp.bounds.assign(d, VariableBounds::Box(-1, 1));
  for (std::size_t w : support) {
    lp.AddConstraint(market.increments()[w], Relation::kGreaterEqual, 0);
  }
  for (std::size_t w0 : candidates) {
    if (!std::binary_search(support.begin(), support.end(), w0)) continue;
    lp.objective = market.increments()[w0];
    LpSolution sol = SolveLp(lp);
    if (sol.status != LpStatus::kOptimal) {
      throw InternalError("arbitrage LP is not optimal: " +
                          std::string(LpStatusName(sol.status)));
    }
    if (sol.value > 0) return ArbitrageWitness{sol.primal, w0};
  }
  return std::nullopt;
}

NaResult CheckNa(const Market& market) {
  NaResult result;
  result.witness = FindArbitrageCharging(market, market.support());
  result.holds = !result.witness;
  return result;
}

AmbiguitySet MartingalePolytope::AsAmbiguitySet() const {
  if (vertices.empty()) throw EmptyMartingalePolytope("no martingale measure");
  return AmbiguitySet(vertices);
}

bool IsMartingaleMeasure(const Market& market, const ProbabilityMeasure& q) {
  if (q.size() != market.outcome_count()) return false;
  if (!DominatedBy(q, market.priors())) return false;
  for (std::size_t i = 0; i < market.asset_count(); ++i) {
    Rational drift = 0;
    for (std::size_t w = 0; w < q.size(); ++w) {
      drift += q[w] * market.increments()[w][i];
    }
    if (drift != 0) return false;
  }
  return true;
}

namespace {

// Unique solution of A x = b when A has full column rank and the system is
// consistent.
std::optional<RationalVector> SolveFullColumnRank(RationalMatrix a,
                                                  RationalVector b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) return std::nullopt;
    std::swap(a[pivot], a[r]);
    std::swap(b[pivot], b[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational factor = a[i][c] / a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= factor * a[r][k];
      b[i] -= factor * b[r];
    }
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (b[i] != 0) return std::nullopt;
  }
  RationalVector x(cols);
  for (std::size_t c = 0; c < cols; ++c) x[c] = b[c] / a[c][c];
  return x;
}

void ForEachCombination(std::size_t n, std::size_t k,
                        const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    visit(pick);
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

RationalVector Expand(std::span<const Rational> restricted,
                      const OutcomeSet& support, std::size_t size) {
  RationalVector out(size, 0);
  for (std::size_t k = 0; k < support.size(); ++k) out[support[k]] = restricted[k];
  return out;
}

// Rows: total mass, then one martingale equality per asset; columns follow
// the support.
void MartingaleSystem(const Market& market, RationalMatrix* a, RationalVector* b) {
  const OutcomeSet& support = market.support();
  a->assign(market.asset_count() + 1, RationalVector(support.size(), 0));
  b->assign(market.asset_count() + 1, 0);
  (*b)[0] = 1;
  for (std::size_t k = 0; k < support.size(); ++k) {
    (*a)[0][k] = 1;
    for (std::size_t i = 0; i < market.asset_count(); ++i) {
      (*a)[i + 1][k] = market.increments()[support[k]][i];
    }
  }
}

}  // namespace

namespace {

// max t subject to the martingale system and q >= t on `charged`.
std::optional<ProbabilityMeasure> MaxMinMass(const Market& market,
                                             const OutcomeSet& charged) {
  const OutcomeSet& support = market.support();
  RationalMatrix a;
  RationalVector b;
  MartingaleSystem(market, &a, &b);
  LinearProgram lp;
  lp.objective.assign(support.size() + 1, 0);
  lp.objective.back() = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    RationalVector row = a[i];
    row.push_back(0);
    lp.AddConstraint(std::move(row), Relation::kEqual, b[i]);
  }
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (!std::binary_search(charged.begin(), charged.end(), support[k])) continue;
    RationalVector row(support.size() + 1, 0);
    row[k] = 1;
    row.back() = -1;
    lp.AddConstraint(std::move(row), Relation::kGreaterEqual, 0);
  }
  LpSolution sol = SolveLp(lp);
  if (sol.status == LpStatus::kUnbounded) {
    throw InternalError("domination LP is unbounded");
  }
  if (sol.status != LpStatus::kOptimal || sol.value <= 0) return std::nullopt;
  return ProbabilityMeasure(Expand(std::span(sol.primal).first(support.size()),
                                   support, market.outcome_count()));
}

}  // namespace

std::optional<ProbabilityMeasure> EquivalentMartingaleMeasure(const Market& market) {
  return MaxMinMass(market, market.support());
}

std::optional<RationalVector> StrictlyPositiveStrategy(const Market& market) {
  const std::size_t d = market.asset_count();
  if (d == 0) return std::nullopt;
  // Variables: H, then t <= 1.
  LinearProgram lp;
  lp.objective.assign(d + 1, 0);
  lp.objective.back() = 1;
  lp.bounds.assign(d, VariableBounds::Box(-1, 1));
  lp.bounds.push_back(VariableBounds{std::nullopt, Rational(1)});
  for (std::size_t w : market.support()) {
    RationalVector row = market.increments()[w];
    row.push_back(-1);
    lp.AddConstraint(std::move(row), Relation::kGreaterEqual, 0);
  }
  LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw InternalError("strict-gain LP is " + std::string(LpStatusName(sol.status)));
  }
  if (sol.value <= 0) return std::nullopt;
  sol.primal.pop_back();
  return sol.primal;
}

MartingalePolytope ComputeMartingalePolytope(const Market& market, int cap) {
  const OutcomeSet& support = market.support();
  CheckEnumerationCap(support.size(), cap);
  RationalMatrix a;
  RationalVector b;
  MartingaleSystem(market, &a, &b);
  MartingalePolytope polytope{support, {}};
  // A vertex is the unique solution on its own support, whose columns are
  // independent, so it has at most d + 1 positive coordinates.
  const std::size_t max_size = std::min(support.size(), a.size());
  for (std::size_t size = 1; size <= max_size; ++size) {
    ForEachCombination(support.size(), size, [&](const std::vector<std::size_t>& cols) {
      RationalMatrix sub(a.size(), RationalVector(size));
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < size; ++j) sub[i][j] = a[i][cols[j]];
      }
      std::optional<RationalVector> x = SolveFullColumnRank(std::move(sub), b);
      if (!x) return;
      for (const Rational& v : *x) {
        if (v <= 0) return;
      }
      RationalVector q(market.outcome_count(), 0);
      for (std::size_t j = 0; j < size; ++j) q[support[cols[j]]] = (*x)[j];
      ProbabilityMeasure vertex(std::move(q));
      if (std::find(polytope.vertices.begin(), polytope.vertices.end(), vertex) ==
          polytope.vertices.end()) {
        polytope.vertices.push_back(std::move(vertex));
      }
    });
  }
  return polytope;
}

FtapResult CheckFtap(const Market& market) {
  FtapResult result;
  result.na_holds = CheckNa(market).holds;
  for (const ProbabilityMeasure& prior : market.priors().vertices()) {
    FtapVertexResult entry{prior, MaxMinMass(market, prior.Support()), false,
                           std::nullopt};
    if (entry.dominating_q) {
      entry.q_dominated_by_priors = DominatedBy(*entry.dominating_q, market.priors());
    } else {
      result.all_vertices_dominated = false;
      entry.obstruction = FindArbitrageCharging(market, prior.Support());
      if (!entry.obstruction) {
        throw InternalError("prior vertex has neither a dominating martingale "
                            "measure nor a charged arbitrage");
      }
    }
    result.per_vertex.push_back(std::move(entry));
  }
  result.na_equivalent = result.na_holds == result.all_vertices_dominated;
  if (!result.na_equivalent) {
    throw InternalError(std::string("NA check says ") +
                        (result.na_holds ? "holds" : "fails") +
                        " but dominating martingale measures " +
                        (result.all_vertices_dominated ? "exist" : "are missing"));
  }
  return result;
}

bool VerifyHedge(const Market& market, const HedgeCertificate& hedge,
                 std::string* why) {
  auto fail = [why](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (hedge.h.size() != market.asset_count()) return fail("H has wrong length");
  if (hedge.payoff.size() != market.outcome_count()) return fail("payoff size");
  for (std::size_t w : market.support()) {
    if (hedge.price + market.Gain(hedge.h, w) < hedge.payoff[w]) {
      return fail("hedge falls short at outcome " + market.space().label(w));
    }
  }
  if (!IsMartingaleMeasure(market, hedge.attaining_q)) {
    return fail("attaining Q is not a martingale measure");
  }
  if (hedge.attaining_q.Expectation(hedge.payoff.values()) != hedge.price) {
    return fail("E_Q[f] differs from the price");
  }
  return true;
}

HedgeCertificate Superhedge(const Market& market, const BoundedFunction& payoff,
                            int cap) {
  if (payoff.size() != market.outcome_count()) {
    throw DimensionMismatch("payoff has " + std::to_string(payoff.size()) +
                            " values for " +
                            std::to_string(market.outcome_count()) + " outcomes");
  }
  NaResult na = CheckNa(market);
  if (!na.holds) throw NaViolated("market admits an arbitrage");
  const std::size_t d = market.asset_count();
  const OutcomeSet& support = market.support();

  // Variables: x, then H.
  LinearProgram price_lp;
  price_lp.sense = Sense::kMinimize;
  price_lp.objective.assign(d + 1, 0);
  price_lp.objective[0] = 1;
  price_lp.bounds.assign(d + 1, VariableBounds::Free());
  for (std::size_t w : support) {
    RationalVector row{1};
    row.insert(row.end(), market.increments()[w].begin(), market.increments()[w].end());
    price_lp.AddConstraint(std::move(row), Relation::kGreaterEqual, payoff[w]);
  }
  LpSolution priced = SolveLp(price_lp);
  if (priced.status != LpStatus::kOptimal) {
    throw InternalError("superhedging LP is " +
                        std::string(LpStatusName(priced.status)) + " under NA");
  }
  const Rational price = priced.value;
  RationalVector q_support(priced.dual.begin(), priced.dual.end());
  ProbabilityMeasure attaining(Expand(q_support, support, market.outcome_count()));

  // Among hedges at this price pick one of least l1 norm: H = H+ - H-.
  LinearProgram norm_lp;
  norm_lp.sense = Sense::kMinimize;
  norm_lp.objective.assign(2 * d, 1);
  for (std::size_t w : support) {
    RationalVector row(2 * d);
    for (std::size_t i = 0; i < d; ++i) {
      row[i] = market.increments()[w][i];
      row[d + i] = -market.increments()[w][i];
    }
    norm_lp.AddConstraint(std::move(row), Relation::kGreaterEqual,
                          payoff[w] - price);
  }
  LpSolution normed = SolveLp(norm_lp);
  if (normed.status != LpStatus::kOptimal) {
    throw InternalError("hedge selection LP is " +
                        std::string(LpStatusName(normed.status)));
  }
  RationalVector h(d);
  for (std::size_t i = 0; i < d; ++i) h[i] = normed.primal[i] - normed.primal[d + i];

  HedgeCertificate hedge{price, std::move(h), payoff, std::move(attaining)};
  std::string why;
  if (!VerifyHedge(market, hedge, &why)) throw InternalError(why);

  MartingalePolytope polytope = ComputeMartingalePolytope(market, cap);
  if (polytope.empty()) throw InternalError("NA holds but no martingale measure");
  Rational best = polytope.vertices[0].Expectation(payoff.values());
  for (const ProbabilityMeasure& q : polytope.vertices) {
    best = std::max(best, q.Expectation(payoff.values()));
  }
  if (best != price) {
    throw InternalError("LP price " + FormatRational(price) +
                        " differs from the vertex maximum " + FormatRational(best));
  }
  return hedge;
}

}  // namespace robust_ftap
