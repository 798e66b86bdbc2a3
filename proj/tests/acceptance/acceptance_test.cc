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

// Acceptance suite: one PASS/FAIL line per criterion. Every check compares
// library output with a computation written here, not with the library's own
// verifier.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "certificate.h"
#include "commands.h"
#include "io.h"
#include "robust_ftap/errors.h"
#include "robust_ftap/halmos_savage.h"
#include "robust_ftap/large_market.h"
#include "robust_ftap/lp.h"
#include "robust_ftap/market.h"
#include "robust_ftap/minimax.h"

namespace robust_ftap {
namespace {

using cli::Json;
using Clock = std::chrono::steady_clock;

Rational Q(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Rational Q(const mpz_class& n, const mpz_class& d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  long Int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
  bool Chance(double p) { return std::bernoulli_distribution(p)(engine_); }

  // n/d with d <= 10 and |value| <= bound.
  Rational Value(long bound) {
    const long d = Int(1, 10);
    return Q(Int(-bound * d, bound * d), d);
  }

  // k/D masses with D <= 10; `zero_chance` blanks coordinates first.
  RationalVector Probability(std::size_t n, double zero_chance = 0.0) {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < n; ++i) {
      if (!Chance(zero_chance)) live.push_back(i);
    }
    if (live.empty()) live.push_back(static_cast<std::size_t>(Int(0, static_cast<long>(n) - 1)));
    const long total = Int(static_cast<long>(live.size()), 10);
    std::vector<long> units(live.size(), 1);
    for (long u = static_cast<long>(live.size()); u < total; ++u) {
      ++units[static_cast<std::size_t>(Int(0, static_cast<long>(live.size()) - 1))];
    }
    RationalVector out(n, 0);
    for (std::size_t k = 0; k < live.size(); ++k) {
      out[live[k]] = Q(units[k], total);
    }
    return out;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

SampleSpace Labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= n; ++i) labels.push_back("w" + std::to_string(i));
  return SampleSpace(std::move(labels));
}

Market RandomMarket(Random& rng) {
  const std::size_t n = static_cast<std::size_t>(rng.Int(1, 6));
  const std::size_t d = static_cast<std::size_t>(rng.Int(0, 3));
  const std::size_t k = static_cast<std::size_t>(rng.Int(1, 4));
  RationalVector s0(d);
  for (auto& x : s0) x = 1 + Q(rng.Int(0, 10), 10);
  // Skewed increments make arbitrage likely in some draws and absent in others.
  const bool skew = rng.Chance(0.3);
  RationalMatrix s1(n, RationalVector(d));
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t j = 0; j < d; ++j) {
      Rational inc = rng.Value(2);
      if (skew && inc < 0) inc = -inc;
      s1[w][j] = s0[j] + inc;
    }
  }
  std::vector<ProbabilityMeasure> priors;
  for (std::size_t i = 0; i < k; ++i) priors.emplace_back(rng.Probability(n, 0.3));
  return Market(Labels(n), s0, s1, AmbiguitySet(std::move(priors)));
}

// Martingale measures on the quasi-sure support, plus `extra` objective
// terms; variables are q_1..q_n followed by `extra_vars`.
LinearProgram MartingaleLp(const Market& market, std::size_t extra_vars) {
  const std::size_t n = market.outcome_count();
  LinearProgram lp;
  lp.sense = Sense::kMaximize;
  lp.objective.assign(n + extra_vars, 0);
  lp.bounds.assign(n + extra_vars, VariableBounds::NonNegative());
  const OutcomeSet& support = market.support();
  for (std::size_t w = 0; w < n; ++w) {
    if (!std::binary_search(support.begin(), support.end(), w)) {
      lp.bounds[w] = VariableBounds::Box(0, 0);
    }
  }
  RationalVector ones(n + extra_vars, 0);
  for (std::size_t w = 0; w < n; ++w) ones[w] = 1;
  lp.AddConstraint(ones, Relation::kEqual, 1);
  for (std::size_t j = 0; j < market.asset_count(); ++j) {
    RationalVector row(n + extra_vars, 0);
    for (std::size_t w = 0; w < n; ++w) row[w] = market.increments()[w][j];
    lp.AddConstraint(row, Relation::kEqual, 0);
  }
  return lp;
}

// Whether some martingale measure on the quasi-sure support charges every
// outcome that `prior` charges: maximize t with q >= t there.
bool OracleDominated(const Market& market, const ProbabilityMeasure& prior, bool* certified) {
  const std::size_t n = market.outcome_count();
  LinearProgram lp = MartingaleLp(market, 1);
  lp.objective[n] = 1;
  lp.bounds[n] = VariableBounds::Box(0, 1);
  for (std::size_t w : prior.Support()) {
    RationalVector row(n + 1, 0);
    row[w] = 1;
    row[n] = -1;
    lp.AddConstraint(row, Relation::kGreaterEqual, 0);
  }
  LpSolution sol = SolveLp(lp);
  if (sol.status == LpStatus::kInfeasible) {
    *certified = CheckInfeasibilityCertificate(lp, sol.dual);
    return false;
  }
  *certified = sol.status == LpStatus::kOptimal && CheckOptimalityCertificate(lp, sol);
  return sol.status == LpStatus::kOptimal && sol.value > 0;
}

std::optional<Rational> OracleMaxExpectation(const Market& market, const RationalVector& f) {
  const std::size_t n = market.outcome_count();
  LinearProgram lp = MartingaleLp(market, 0);
  for (std::size_t w = 0; w < n; ++w) lp.objective[w] = f[w];
  LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal || !CheckOptimalityCertificate(lp, sol)) {
    return std::nullopt;
  }
  return sol.value;
}

struct Report {
  bool pass = true;
  std::string detail;
};

void Print(int id, const std::string& title, const Report& r, double seconds) {
  std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << title
            << "): " << r.detail << " [" << std::fixed;
  std::cout.precision(3);
  std::cout << seconds << " s]" << std::endl;
}

// ---- criteria 1 and 2 ----

Report FtapAndSuperhedge(Random& rng, std::vector<Market>* na_markets, Report* superhedge,
                         double* superhedge_seconds) {
  Report r;
  int na = 0, mismatches = 0, uncertified = 0, ftap_disagree = 0;
  int payoffs = 0, price_mismatch = 0, hedge_fail = 0;
  double hedge_time = 0;
  const int count = 1000;
  for (int i = 0; i < count; ++i) {
    Market market = RandomMarket(rng);
    const bool holds = CheckNa(market).holds;
    bool all = true;
    for (const ProbabilityMeasure& p : market.priors().vertices()) {
      bool certified = false;
      all = OracleDominated(market, p, &certified) && all;
      if (!certified) ++uncertified;
    }
    if (holds != all) ++mismatches;
    FtapResult ftap = CheckFtap(market);
    if (ftap.na_holds != holds || ftap.all_vertices_dominated != all) ++ftap_disagree;
    if (!holds) continue;
    ++na;
    if (na_markets->size() < 40) na_markets->push_back(market);
    const auto start = Clock::now();
    MartingalePolytope polytope = ComputeMartingalePolytope(market);
    for (int k = 0; k < 5; ++k) {
      RationalVector f(market.outcome_count());
      for (auto& x : f) x = rng.Value(3);
      ++payoffs;
      HedgeCertificate hedge = Superhedge(market, BoundedFunction(f));
      Rational vertex_max = polytope.vertices.at(0).Expectation(f);
      for (const ProbabilityMeasure& q : polytope.vertices) {
        vertex_max = std::max(vertex_max, q.Expectation(f));
      }
      std::optional<Rational> lp_max = OracleMaxExpectation(market, f);
      if (hedge.price != vertex_max || !lp_max || *lp_max != hedge.price) ++price_mismatch;
      const RationalVector gains = market.Gains(hedge.h);
      for (std::size_t w : market.support()) {
        if (hedge.price + gains[w] < f[w]) {
          ++hedge_fail;
          break;
        }
      }
    }
    hedge_time += Seconds(start);
  }
  r.pass = mismatches == 0 && uncertified == 0 && ftap_disagree == 0 && na > 0 && na < count;
  r.detail = std::to_string(count) + " markets, " + std::to_string(na) + " with NA, " +
             std::to_string(mismatches) + " verdict mismatches, " +
             std::to_string(ftap_disagree) + " ftap disagreements, " +
             std::to_string(uncertified) + " uncertified oracle LPs";
  superhedge->pass = price_mismatch == 0 && hedge_fail == 0 && payoffs >= 5 * na;
  superhedge->detail = std::to_string(payoffs) + " payoffs on " + std::to_string(na) +
                       " NA markets, " + std::to_string(price_mismatch) + " price mismatches, " +
                       std::to_string(hedge_fail) + " hedge violations";
  *superhedge_seconds = hedge_time;
  return r;
}

// ---- criterion 3 ----

Report MinimaxExchange(Random& rng) {
  int failures = 0;
  const int count = 500;
  for (int i = 0; i < count; ++i) {
    const std::size_t nx = static_cast<std::size_t>(rng.Int(1, 6));
    const std::size_t ny = static_cast<std::size_t>(rng.Int(1, 6));
    MinimaxInstance game;
    const std::size_t kx = static_cast<std::size_t>(rng.Int(1, 6));
    for (std::size_t k = 0; k < kx; ++k) {
      RationalVector point(nx);
      for (auto& x : point) x = rng.Value(2);
      game.x_set.points.push_back(std::move(point));
    }
    game.payoff.assign(ny, RationalVector(nx));
    for (auto& row : game.payoff) for (auto& b : row) b = rng.Value(2);
    const bool vertex_y = rng.Chance(0.5);
    RationalMatrix y_points;
    ConstraintPolytope box;
    if (vertex_y) {
      const std::size_t ky = static_cast<std::size_t>(rng.Int(1, 6));
      for (std::size_t k = 0; k < ky; ++k) {
        RationalVector point(ny);
        for (auto& y : point) y = rng.Value(2);
        y_points.push_back(std::move(point));
      }
      game.y_set = VertexPolytope{y_points};
    } else {
      for (std::size_t j = 0; j < ny; ++j) {
        Rational lo = rng.Value(2);
        Rational hi = lo + Q(rng.Int(0, 20), 10);
        box.bounds.push_back(VariableBounds::Box(lo, hi));
      }
      game.y_set = box;
    }
    MinimaxResult res = MinimaxValue(game);
    bool ok = res.x_weights.size() == kx;
    RationalVector mixed(nx, 0);
    Rational total = 0;
    for (std::size_t k = 0; ok && k < kx; ++k) {
      ok = res.x_weights[k] >= 0;
      total += res.x_weights[k];
      for (std::size_t c = 0; c < nx; ++c) mixed[c] += res.x_weights[k] * game.x_set.points[k][c];
    }
    ok = ok && total == 1 && mixed == res.x_star && res.y_star.size() == ny;
    if (!ok) {
      ++failures;
      continue;
    }
    // Best response of y against x*: exact over the vertices or the box.
    RationalVector bx(ny, 0);
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t c = 0; c < nx; ++c) bx[j] += game.payoff[j][c] * res.x_star[c];
    }
    Rational inf_y;
    if (vertex_y) {
      inf_y = Dot(y_points[0], bx);
      for (const RationalVector& y : y_points) inf_y = std::min(inf_y, Dot(y, bx));
      ok = res.y_weights.size() == y_points.size();
      RationalVector ymix(ny, 0);
      Rational ytotal = 0;
      for (std::size_t k = 0; ok && k < y_points.size(); ++k) {
        ok = res.y_weights[k] >= 0;
        ytotal += res.y_weights[k];
        for (std::size_t j = 0; j < ny; ++j) ymix[j] += res.y_weights[k] * y_points[k][j];
      }
      ok = ok && ytotal == 1 && ymix == res.y_star;
    } else {
      inf_y = 0;
      for (std::size_t j = 0; j < ny; ++j) {
        const Rational& lo = *box.bounds[j].lower;
        const Rational& hi = *box.bounds[j].upper;
        inf_y += std::min(lo * bx[j], hi * bx[j]);
        ok = ok && res.y_star[j] >= lo && res.y_star[j] <= hi;
      }
    }
    // Best response of x against y*.
    Rational sup_x = BilinearValue(game.payoff, game.x_set.points[0], res.y_star);
    for (const RationalVector& x : game.x_set.points) {
      sup_x = std::max(sup_x, BilinearValue(game.payoff, x, res.y_star));
    }
    // sup_x inf_y >= inf_y and inf_y sup_x <= sup_x; equality of both with
    // the value closes the gap.
    if (!ok || inf_y != res.value || sup_x != res.value) ++failures;
  }
  return {failures == 0, std::to_string(count) + " games, " + std::to_string(failures) +
                             " without an exact saddle point"};
}

// ---- criteria 4 and 5 ----

using Family = std::vector<RationalVector>;

Rational Mass(const RationalVector& m, std::uint32_t mask) {
  Rational total = 0;
  for (std::size_t w = 0; w < m.size(); ++w) {
    if (mask >> w & 1U) total += m[w];
  }
  return total;
}

Rational Extreme(const Family& f, std::uint32_t mask, bool max) {
  Rational best = Mass(f[0], mask);
  for (const RationalVector& m : f) {
    Rational v = Mass(m, mask);
    best = max ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

AmbiguitySet ToSet(const Family& f) {
  std::vector<ProbabilityMeasure> v;
  for (const RationalVector& m : f) v.emplace_back(m);
  return AmbiguitySet(std::move(v));
}

struct HsCounts {
  int primal = 0, dual = 0;
  int primal_fail = 0, dual_fail = 0, hypothesis_disagree = 0;
  int lemma_primal_fail = 0, lemma_dual_fail = 0, lemma_checks = 0;
};

bool CheckWitnessMixture(const HsWitness& w, const Family& q) {
  if (w.q_weights.size() != q.size()) return false;
  RationalVector mixed(q[0].size(), 0);
  Rational total = 0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (w.q_weights[k] < 0) return false;
    total += w.q_weights[k];
    for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] += w.q_weights[k] * q[k][i];
  }
  return total == 1 && mixed == w.q_star.masses();
}

// Saddle consistency and the bound for one basic-lemma value.
bool LemmaHolds(const HsInstance& instance, const ProbabilityMeasure& p, DSetKind kind) {
  BasicLemmaResult res = BasicLemmaValue(instance, p, kind);
  const Rational& eps = instance.epsilon();
  const Rational& delta = instance.delta();
  const Rational threshold = kind == DSetKind::kPrimal ? Rational(2 * eps) : Rational(eps * delta);
  const Rational ph = p.Expectation(res.optimal_h);
  bool in_d = kind == DSetKind::kPrimal ? ph >= threshold : ph <= threshold;
  for (const Rational& h : res.optimal_h) in_d = in_d && h >= 0 && h <= 1;
  if (!in_d || res.optimal_q.Expectation(res.optimal_h) != res.value) return false;
  return kind == DSetKind::kPrimal ? res.value >= eps * delta : res.value <= 2 * eps;
}

void HsInstances(Random& rng, HsCounts* c) {
  const int target = 300;
  for (int attempt = 0; attempt < 200000 && (c->primal < target || c->dual < target); ++attempt) {
    const std::size_t n = static_cast<std::size_t>(rng.Int(1, 8));
    Family p;
    const std::size_t kp = static_cast<std::size_t>(rng.Int(1, 3));
    for (std::size_t k = 0; k < kp; ++k) p.push_back(rng.Probability(n, rng.Chance(0.5) ? 0.3 : 0.0));
    std::vector<std::size_t> support;
    for (std::size_t w = 0; w < n; ++w) {
      for (const RationalVector& m : p) {
        if (m[w] > 0) {
          support.push_back(w);
          break;
        }
      }
    }
    Family q;
    const std::size_t kq = static_cast<std::size_t>(rng.Int(1, 3));
    for (std::size_t k = 0; k < kq; ++k) {
      RationalVector inner = rng.Probability(support.size(), rng.Chance(0.5) ? 0.3 : 0.0);
      RationalVector full(n, 0);
      for (std::size_t i = 0; i < support.size(); ++i) full[support[i]] = inner[i];
      q.push_back(std::move(full));
    }
    const Rational eps = Q(rng.Int(1, 5), 10);
    const std::uint32_t all = 1U << n;
    const Rational factors[] = {Q(1, 2), Q(3, 4), Rational(1)};
    const Rational factor = factors[rng.Int(0, 2)];

    // Primal: delta below the least max_Q Q(A) over events with max_P P(A) >= eps.
    std::optional<Rational> modulus;
    for (std::uint32_t a = 0; a < all; ++a) {
      if (Extreme(p, a, true) < eps) continue;
      Rational v = Extreme(q, a, true);
      if (!modulus || v < *modulus) modulus = v;
    }
    if (c->primal < target && modulus && *modulus > 0) {
      Rational delta = *modulus * factor;
      delta.canonicalize();
      HsInstance instance(ToSet(p), ToSet(q), eps, delta);
      if (!CheckHypothesisPrimal(instance).holds) ++c->hypothesis_disagree;
      if (*modulus < 1) {
        Rational above = (*modulus + 1) / 2;
        HsInstance failing(ToSet(p), ToSet(q), eps, above);
        if (CheckHypothesisPrimal(failing).holds) ++c->hypothesis_disagree;
      }
      ++c->primal;
      for (const RationalVector& pv : p) {
        const ProbabilityMeasure pm(pv);
        HsWitness w = ConstructHsWitness(instance, pm);
        bool ok = CheckWitnessMixture(w, q);
        for (std::uint32_t a = 0; ok && a < all; ++a) {
          if (Mass(pv, a) >= 2 * eps) ok = 2 * Mass(w.q_star.masses(), a) >= eps * delta;
        }
        if (!ok) ++c->primal_fail;
        ++c->lemma_checks;
        if (!LemmaHolds(instance, pm, DSetKind::kPrimal)) ++c->lemma_primal_fail;
      }
    }

    // Dual: delta below the least min_P P(A) over events with min_Q Q(A) >= eps.
    std::optional<Rational> dual_modulus;
    for (std::uint32_t a = 0; a < all; ++a) {
      if (Extreme(q, a, false) < eps) continue;
      Rational v = Extreme(p, a, false);
      if (!dual_modulus || v < *dual_modulus) dual_modulus = v;
    }
    if (c->dual < target && dual_modulus && *dual_modulus > 0) {
      Rational delta = *dual_modulus * factor;
      delta.canonicalize();
      HsInstance instance(ToSet(p), ToSet(q), eps, delta);
      if (!CheckHypothesisDual(instance).holds) ++c->hypothesis_disagree;
      if (*dual_modulus < 1) {
        Rational above = (*dual_modulus + 1) / 2;
        HsInstance failing(ToSet(p), ToSet(q), eps, above);
        if (CheckHypothesisDual(failing).holds) ++c->hypothesis_disagree;
      }
      ++c->dual;
      for (const RationalVector& pv : p) {
        const ProbabilityMeasure pm(pv);
        HsWitness w = ConstructDualHsWitness(instance, pm);
        bool ok = CheckWitnessMixture(w, q);
        for (std::uint32_t a = 0; ok && a < all; ++a) {
          if (Mass(pv, a) < eps * delta) ok = Mass(w.q_star.masses(), a) < 2 * eps;
        }
        if (!ok) ++c->dual_fail;
        ++c->lemma_checks;
        if (!LemmaHolds(instance, pm, DSetKind::kDual)) ++c->lemma_dual_fail;
      }
    }
  }
}

// ---- criteria 6 to 8 ----

Market TwoPoint(const Rational& down, const SampleSpace& space) {
  return Market(space, {Rational(1)}, {{Rational(2)}, {1 + down}},
                AmbiguitySet({ProbabilityMeasure({Q(1, 2), Q(1, 2)})}));
}

std::vector<Market> TwoPointFamily(std::function<Rational(long)> down, long count) {
  std::vector<Market> out;
  const SampleSpace space = Labels(2);
  for (long n = 1; n <= count; ++n) out.push_back(TwoPoint(down(n), space));
  return out;
}

Report PositiveControl() {
  const long count = 20;
  MarketSequence seq(TwoPointFamily([](long n) { return Q(-1, n); }, count));
  std::optional<AaWitness> w = ScanAa1(seq, DefaultAlphaGrid(), DefaultCSchedule(count));
  if (!w) return {false, "no AA1 witness found"};
  bool ok = w->alpha == Q(1, 2) && w->steps.size() == static_cast<std::size_t>(count);
  int bound_failures = 0;
  for (std::size_t k = 0; ok && k < w->steps.size(); ++k) {
    const AaStep& step = w->steps[k];
    const long c_den = static_cast<long>(k + 1);
    ok = step.lower_bound == Q(1, c_den);
    const long n = static_cast<long>(step.market_index + 1);
    // q_up solves q_up - (1 - q_up)/n = 0.
    const Rational q_up = Q(1, n + 1);
    const Market& market = seq.market(step.market_index);
    const RationalVector gains = market.Gains(step.h);
    const Rational oracle_mass = (gains[0] >= w->alpha ? q_up : Rational(0)) +
                                 (gains[1] >= w->alpha ? 1 - q_up : Rational(0));
    const Rational library_mass = MaxMartingaleMass(market, step, w->alpha);
    if (oracle_mass != library_mass || oracle_mass != q_up ||
        oracle_mass > step.lower_bound / w->alpha) {
      ++bound_failures;
    }
  }
  return {ok && bound_failures == 0,
          "alpha = " + FormatRational(w->alpha) + ", " + std::to_string(w->steps.size()) +
              " steps with c_k = 1/k, " + std::to_string(bound_failures) +
              " martingale-bound failures"};
}

Report NegativeControl() {
  const long count = 20;
  MarketSequence seq(TwoPointFamily([](long) { return Rational(-1); }, count));
  ModulusTable table = CertifyModuli(seq, DefaultAlphaGrid(), DSetKind::kPrimal);
  bool ok = table.certified();
  for (const Rational& d : table.uniform_delta) ok = ok && d == Q(1, 2);
  const bool none1 = !ScanAa1(seq, DefaultAlphaGrid(), DefaultCSchedule(count));
  const bool none2 = !ScanAa2(seq, DefaultAlphaGrid(), DefaultTargetLevels(count - 1));
  std::string deltas;
  for (const Rational& d : table.uniform_delta) deltas += (deltas.empty() ? "" : ",") + FormatRational(d);
  return {ok && none1 && none2, "uniform delta {" + deltas + "}, AA1 " +
                                    (none1 ? "none" : "found") + ", AA2 " +
                                    (none2 ? "none" : "found")};
}

Report Contiguous() {
  const long count = 20;
  MarketSequence seq(TwoPointFamily([](long) { return Rational(-1); }, count));
  ContiguousSequence cs = BuildContiguousSequence(seq);
  int failures = 0;
  int checked = 0;
  for (long n = 1; n <= count; ++n) {
    const ContiguousEntry& e = cs.entries[static_cast<std::size_t>(n - 1)];
    Rational total = 0;
    for (long m = 1; m <= n; ++m) {
      const Rational expected =
          Q(1, mpz_class(1) << m) / (1 - Q(1, mpz_class(1) << n));
      if (e.components[static_cast<std::size_t>(m - 1)].weight != expected) ++failures;
      total += e.components[static_cast<std::size_t>(m - 1)].weight;
    }
    if (total != 1) ++failures;
    for (long m = 1; m <= n; ++m) {
      const Rational eps(1, m);
      if (cs.epsilons[static_cast<std::size_t>(m - 1)] != eps) ++failures;
      const Rational beta = eps * cs.deltas[static_cast<std::size_t>(m - 1)] / 2 /
                            Rational(mpz_class(1) << m);
      for (std::uint32_t a = 0; a < 4; ++a) {
        ++checked;
        if (Mass(e.prior.masses(), a) >= 2 * eps && Mass(e.q.masses(), a) < beta) ++failures;
      }
    }
    if (e.q.masses()[0] != e.q.masses()[1]) ++failures;  // the unique martingale measure
  }
  return {failures == 0, std::to_string(count) + " markets, " + std::to_string(checked) +
                             " (n, m, A) bound checks, " + std::to_string(failures) + " failures"};
}

// ---- criterion 9 ----

Json Certify(const std::string& command, Json inputs) {
  cli::CommandResult r = cli::Execute(command, inputs);
  return cli::AssembleCertificate(command, inputs, r.verdict, r.witness);
}

Json Options(Json extra = Json::object()) {
  extra["max_enum"] = 20;
  return extra;
}

Json SequenceInputs(const std::vector<Market>& markets, Json options) {
  std::vector<cli::SequenceEntry> entries;
  for (const Market& m : markets) entries.push_back({m, std::nullopt, std::nullopt});
  return {{"sequence", cli::SequenceToJson(entries)}, {"options", std::move(options)}};
}

Report SelfVerification(Random& rng, const std::vector<Market>& na_markets) {
  std::vector<Json> certs;
  Random local(7);
  for (int i = 0; i < 30; ++i) {
    Market m = RandomMarket(local);
    Json inputs = {{"market", cli::MarketToJson(m)}, {"options", Options()}};
    certs.push_back(Certify("check-na", inputs));
    certs.push_back(Certify("ftap", inputs));
    certs.push_back(Certify("martingale-polytope", inputs));
  }
  for (std::size_t i = 0; i < na_markets.size() && i < 20; ++i) {
    const Market& m = na_markets[i];
    RationalVector f(m.outcome_count());
    for (auto& x : f) x = local.Value(2);
    certs.push_back(Certify("superhedge", {{"market", cli::MarketToJson(m)},
                                           {"payoff", cli::ToJson(f)},
                                           {"options", Options()}}));
    certs.push_back(Certify("hs-modulus",
                            {{"market", cli::MarketToJson(m)},
                             {"options", Options({{"epsilon", "1/3"}, {"dual", i % 2 == 1}})}}));
  }
  const Json pair = {{"outcomes", Json::array({"w1", "w2"})},
                     {"P_vertices", Json::array({Json::array({"1", "0"}), Json::array({"0", "1"})})},
                     {"Q_vertices", Json::array({Json::array({"1/3", "2/3"})})}};
  certs.push_back(Certify("hs-check", {{"pair", pair},
                                       {"options", Options({{"epsilon", "1/2"}, {"delta", "1/3"}})}}));
  certs.push_back(Certify("hs-witness", {{"pair", pair},
                                         {"options", Options({{"epsilon", "1/2"},
                                                              {"delta", "1/3"},
                                                              {"vertex", 1}})}}));
  certs.push_back(Certify("hs-dual-witness", {{"pair", pair},
                                              {"options", Options({{"epsilon", "3/4"},
                                                                   {"delta", "1/4"},
                                                                   {"vertex", 2}})}}));
  const auto positive = TwoPointFamily([](long n) { return Q(-1, n); }, 20);
  const auto negative = TwoPointFamily([](long) { return Rational(-1); }, 20);
  certs.push_back(Certify("scan-aa1", SequenceInputs(positive, Options(
      {{"alpha_grid", cli::ToJson(DefaultAlphaGrid())},
       {"c_schedule", cli::ToJson(DefaultCSchedule(20))}}))));
  certs.push_back(Certify("certify-naa1", SequenceInputs(negative, Options(
      {{"epsilon_grid", cli::ToJson(DefaultAlphaGrid())}}))));
  certs.push_back(Certify("certify-naa2", SequenceInputs(negative, Options(
      {{"epsilon_grid", cli::ToJson(DefaultAlphaGrid())}}))));
  certs.push_back(Certify("build-contiguous", SequenceInputs(negative, Options())));
  certs.push_back(Certify("weak-contiguity", SequenceInputs(negative, Options({{"epsilon", "1/2"}}))));

  int rejected_originals = 0;
  for (const Json& c : certs) {
    if (!cli::VerifyCertificate(c).accepted) ++rejected_originals;
  }

  const std::regex rational("-?[0-9]+(/[1-9][0-9]*)?");
  int mutations = 0;
  int accepted_mutants = 0;
  const int target = 200;
  while (mutations < target) {
    const Json& original = certs[static_cast<std::size_t>(rng.Int(0, static_cast<long>(certs.size()) - 1))];
    const Json flat = original.flatten();
    std::vector<std::string> pointers;
    for (auto it = flat.begin(); it != flat.end(); ++it) {
      if (it.key() == "/inputs_digest" || !it.value().is_string()) continue;
      if (std::regex_match(it.value().get<std::string>(), rational)) pointers.push_back(it.key());
    }
    if (pointers.empty()) continue;
    const std::string pointer =
        pointers[static_cast<std::size_t>(rng.Int(0, static_cast<long>(pointers.size()) - 1))];
    Json mutant = original;
    const Json::json_pointer at(pointer);
    std::string text = mutant[at].get<std::string>();
    std::vector<std::size_t> digits;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (std::isdigit(static_cast<unsigned char>(text[i]))) digits.push_back(i);
    }
    const std::size_t pos = digits[static_cast<std::size_t>(rng.Int(0, static_cast<long>(digits.size()) - 1))];
    text[pos] = static_cast<char>('0' + (text[pos] - '0' + rng.Int(1, 9)) % 10);
    mutant[at] = text;
    ++mutations;
    if (cli::VerifyCertificate(mutant).accepted) ++accepted_mutants;
  }
  return {rejected_originals == 0 && accepted_mutants == 0,
          std::to_string(certs.size() - static_cast<std::size_t>(rejected_originals)) + "/" +
              std::to_string(certs.size()) + " certificates accepted, " +
              std::to_string(mutations - accepted_mutants) + "/" + std::to_string(mutations) +
              " single-digit mutations rejected"};
}

int Main() {
  Random rng(20261016);
  bool all = true;
  auto record = [&all](int id, const std::string& title, const Report& r, double seconds,
                       double limit) {
    Report shown = r;
    if (limit > 0 && seconds > limit) {
      shown.pass = false;
      shown.detail += ", over the " + std::to_string(static_cast<int>(limit)) + " s budget";
    }
    all = all && shown.pass;
    Print(id, title, shown, seconds);
  };
  auto guarded = [](const std::function<Report()>& body) {
    try {
      return body();
    } catch (const std::exception& e) {
      return Report{false, std::string("exception: ") + e.what()};
    }
  };
  auto timed = [&](int id, const std::string& title, const std::function<Report()>& body,
                   double limit) {
    const auto begin = Clock::now();
    const Report r = guarded(body);
    record(id, title, r, Seconds(begin), limit);
  };

  std::vector<Market> na_markets;
  Report superhedge;
  double superhedge_seconds = 0;
  auto start = Clock::now();
  Report ftap = guarded([&] {
    return FtapAndSuperhedge(rng, &na_markets, &superhedge, &superhedge_seconds);
  });
  const double ftap_seconds = Seconds(start) - superhedge_seconds;
  if (ftap.detail.rfind("exception", 0) == 0) superhedge = ftap;
  record(1, "FTAP equivalence", ftap, ftap_seconds, 60);
  record(2, "superhedging duality", superhedge, superhedge_seconds, 0);

  timed(3, "minimax exchange", [&] { return MinimaxExchange(rng); }, 0);

  start = Clock::now();
  HsCounts c;
  Report hs_error = guarded([&] {
    HsInstances(rng, &c);
    return Report{true, ""};
  });
  const double hs_seconds = Seconds(start);
  Report hs = hs_error;
  Report lemma = hs_error;
  if (hs_error.pass) {
    hs = {c.primal >= 300 && c.dual >= 300 && c.primal_fail == 0 && c.dual_fail == 0 &&
              c.hypothesis_disagree == 0,
          std::to_string(c.primal) + " primal and " + std::to_string(c.dual) +
              " dual instances, " + std::to_string(c.primal_fail + c.dual_fail) +
              " witness failures, " + std::to_string(c.hypothesis_disagree) +
              " hypothesis disagreements"};
    lemma = {c.lemma_primal_fail == 0 && c.lemma_dual_fail == 0 && c.lemma_checks > 0,
             std::to_string(c.lemma_checks) + " lemma values, " +
                 std::to_string(c.lemma_primal_fail) + " primal and " +
                 std::to_string(c.lemma_dual_fail) + " dual bound failures"};
  }
  record(4, "quantitative Halmos-Savage", hs, hs_seconds, 120);
  record(5, "basic lemma bounds", lemma, hs_seconds, 0);

  timed(6, "large-market positive control", PositiveControl, 5);
  timed(7, "large-market negative control", NegativeControl, 5);
  timed(8, "contiguous sequence", Contiguous, 0);
  timed(9, "certificate self-verification", [&] { return SelfVerification(rng, na_markets); }, 0);
  return all ? 0 : 1;
}

}  // namespace
}  // namespace robust_ftap

int main() { return robust_ftap::Main(); }
