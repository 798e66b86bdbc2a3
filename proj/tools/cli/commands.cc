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

#include "commands.h"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "robust_ftap/errors.h"
#include "robust_ftap/halmos_savage.h"
#include "robust_ftap/large_market.h"
#include "robust_ftap/market.h"
#include "robust_ftap/subsets.h"

namespace robust_ftap::cli {
namespace {

const Reader& Canon() {
  static const Reader reader(nullptr, /*canonical=*/true);
  return reader;
}

std::string Fmt(const Rational& r) { return FormatRational(r); }

std::string Row(std::span<const Rational> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += Fmt(values[i]);
  }
  return out + "]";
}

std::string Labels(const OutcomeSet& event, const SampleSpace& space) {
  std::string out = "{";
  for (std::size_t i = 0; i < event.size(); ++i) {
    if (i > 0) out += ", ";
    out += space.label(event[i]);
  }
  return out + "}";
}

std::string Ordinal(std::size_t zero_based) { return std::to_string(zero_based + 1); }

// ---- inputs ----

const Json& Options(const Json& inputs) {
  return Canon().Field(inputs, "options", "inputs");
}

const Json& Option(const Json& inputs, const std::string& key) {
  return Canon().Field(Options(inputs), key, "inputs.options");
}

int Cap(const Json& inputs) {
  const long long cap = Canon().Integer(Option(inputs, "max_enum"), "inputs.options.max_enum");
  if (cap < 0 || cap > kHardEnumerationLimit) {
    Canon().Fail("inputs.options.max_enum", "out of range");
  }
  return static_cast<int>(cap);
}

Rational OptNumber(const Json& inputs, const std::string& key) {
  return Canon().Number(Option(inputs, key), "inputs.options." + key);
}

RationalVector OptVector(const Json& inputs, const std::string& key) {
  return Canon().Vector(Option(inputs, key), "inputs.options." + key);
}

Market LoadMarket(const Json& inputs) {
  return MarketFromJson(Canon(), Canon().Field(inputs, "market", "inputs"), "inputs.market");
}

struct LoadedSequence {
  MarketSequence sequence;
  std::vector<ProbabilityMeasure> priors;  // empty: first vertex of each market
};

LoadedSequence LoadSequence(const Json& inputs) {
  std::vector<SequenceEntry> entries = SequenceFromJson(
      Canon(), Canon().Field(inputs, "sequence", "inputs"), "inputs.sequence");
  std::vector<Market> markets;
  std::vector<std::optional<int>> caps;
  std::vector<ProbabilityMeasure> priors;
  std::size_t with_prior = 0;
  for (const SequenceEntry& e : entries) {
    if (e.prior) ++with_prior;
  }
  if (with_prior != 0 && with_prior != entries.size()) {
    Canon().Fail("inputs.sequence.markets", "give a prior for every market or for none");
  }
  for (SequenceEntry& e : entries) {
    markets.push_back(std::move(e.market));
    caps.push_back(e.max_enum);
    if (e.prior) priors.push_back(std::move(*e.prior));
  }
  return {MarketSequence(std::move(markets), std::move(caps)), std::move(priors)};
}

const ProbabilityMeasure& PriorOf(const LoadedSequence& loaded, std::size_t n) {
  return loaded.priors.empty() ? loaded.sequence.market(n).priors().vertex(0)
                               : loaded.priors[n];
}

// ---- witness readers ----

RationalVector Vec(const Json& node, const std::string& key, const std::string& path,
                   std::optional<std::size_t> size = std::nullopt) {
  return Canon().Vector(Canon().Field(node, key, path), path + "." + key, size);
}

Rational Num(const Json& node, const std::string& key, const std::string& path) {
  return Canon().Number(Canon().Field(node, key, path), path + "." + key);
}

bool Flag(const Json& node, const std::string& key, const std::string& path) {
  return Canon().Bool(Canon().Field(node, key, path), path + "." + key);
}

long long Int(const Json& node, const std::string& key, const std::string& path) {
  return Canon().Integer(Canon().Field(node, key, path), path + "." + key);
}

const Json& Arr(const Json& node, const std::string& key, const std::string& path) {
  return Canon().Array(Canon().Field(node, key, path), path + "." + key);
}

std::size_t OutcomeOf(const Json& node, const std::string& key, const std::string& path,
                      const SampleSpace& space) {
  const std::string label = Canon().String(Canon().Field(node, key, path), path + "." + key);
  std::optional<std::size_t> at = space.IndexOf(label);
  if (!at) Canon().Fail(path + "." + key, "unknown outcome '" + label + "'");
  return *at;
}

void RequireNull(const Json& node, const std::string& key, const std::string& path) {
  if (!Canon().Field(node, key, path).is_null()) Canon().Fail(path + "." + key, "expected null");
}

// ---- arithmetic helpers ----

Rational MinOn(std::span<const Rational> values, const OutcomeSet& where) {
  Rational best = 0;
  bool first = true;
  for (std::size_t w : where) {
    if (first || values[w] < best) best = values[w];
    first = false;
  }
  return best;
}

Rational MassOff(std::span<const Rational> q, const OutcomeSet& support) {
  Rational total = 0;
  for (std::size_t w = 0; w < q.size(); ++w) {
    if (!std::binary_search(support.begin(), support.end(), w)) total += q[w];
  }
  return total;
}

Rational Distance(std::span<const Rational> a, std::span<const Rational> b) {
  Rational total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += Abs(a[i] - b[i]);
  return total;
}

OutcomeSet SupportOf(std::span<const Rational> q) {
  OutcomeSet out;
  for (std::size_t w = 0; w < q.size(); ++w) {
    if (q[w] != 0) out.push_back(w);
  }
  return out;
}

std::size_t Rank(RationalMatrix rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

Rational Power2Inverse(std::size_t m) { return Rational(1, mpz_class(1) << m); }

std::vector<RationalVector> Masses(const AmbiguitySet& family) {
  std::vector<RationalVector> out;
  for (const ProbabilityMeasure& v : family.vertices()) out.push_back(v.masses());
  return out;
}

// ---- exhaustive event scans ----

enum class Agg { kMax, kMin };

Rational Aggregate(std::span<const Rational> values, Agg agg) {
  return agg == Agg::kMax ? *std::max_element(values.begin(), values.end())
                          : *std::min_element(values.begin(), values.end());
}

struct EventScan {
  std::optional<Rational> best;
  std::uint64_t count = 0;
};

// Events A within `support` qualify when premise(agg of A-masses over
// `premise_side`) holds; reports the `want` extremum of the `score_side`
// aggregate over qualifying events.
EventScan ScanEvents(const OutcomeSet& support, const std::vector<RationalVector>& premise_side,
                     Agg premise_agg, const std::function<bool(const Rational&)>& premise,
                     const std::vector<RationalVector>& score_side, Agg score_agg, Agg want,
                     int cap) {
  std::vector<const RationalVector*> measures;
  for (const RationalVector& m : premise_side) measures.push_back(&m);
  for (const RationalVector& m : score_side) measures.push_back(&m);
  const std::size_t np = premise_side.size();
  EventScan scan;
  ForEachSubset(support, measures, cap, [&](SubsetMask, std::span<const Rational> sums) {
    if (!premise(Aggregate(sums.subspan(0, np), premise_agg))) return;
    ++scan.count;
    Rational score = Aggregate(sums.subspan(np), score_agg);
    if (!scan.best || (want == Agg::kMin ? score < *scan.best : score > *scan.best)) {
      scan.best = std::move(score);
    }
  });
  return scan;
}

// ---- claim helpers ----

void ClaimMeasure(Transcript* t, const std::string& name, std::span<const Rational> m) {
  t->Add(name + ": total mass", Sum(m), "==", 1);
  t->Add(name + ": least mass", m.empty() ? Rational(0) : *std::min_element(m.begin(), m.end()),
         ">=", 0);
}

void ClaimMartingale(Transcript* t, const std::string& name, const Market& market,
                     std::span<const Rational> q) {
  for (std::size_t j = 0; j < market.asset_count(); ++j) {
    Rational drift = 0;
    for (std::size_t w = 0; w < q.size(); ++w) drift += q[w] * market.increments()[w][j];
    t->Add(name + ": expected increment of asset " + Ordinal(j), drift, "==", 0);
  }
}

void ClaimMartingaleMember(Transcript* t, const std::string& name, const Market& market,
                           std::span<const Rational> q) {
  ClaimMeasure(t, name, q);
  ClaimMartingale(t, name, market, q);
  t->Add(name + ": mass off the quasi-sure support", MassOff(q, market.support()), "==", 0);
}

void ClaimMixture(Transcript* t, const std::string& name,
                  const std::vector<RationalVector>& vertices, const RationalVector& weights,
                  const RationalVector& target, const std::string& path) {
  if (weights.size() != vertices.size()) Canon().Fail(path, "one weight per vertex expected");
  ClaimMeasure(t, name + " weights", weights);
  RationalVector mixed(target.size(), 0);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    for (std::size_t w = 0; w < mixed.size(); ++w) mixed[w] += weights[k] * vertices[k][w];
  }
  t->Add(name + ": distance to the stated mixture", Distance(mixed, target), "==", 0);
}

// Claims that a scan attains `relation` `rhs`, or that no event qualifies.
void ClaimScan(Transcript* t, const std::string& name, const EventScan& scan,
               const std::string& relation, const Rational& rhs) {
  if (scan.best) {
    t->Add(name, *scan.best, relation, rhs);
  } else {
    t->Add(name + ": qualifying events", Rational(scan.count), "==", 0);
  }
}

std::function<bool(const Rational&)> AtLeast(const Rational& bound) {
  return [bound](const Rational& v) { return v >= bound; };
}

std::function<bool(const Rational&)> Below(const Rational& bound) {
  return [bound](const Rational& v) { return v < bound; };
}

// ---- shared witnesses ----

Json ArbitrageJson(const Market& market, const ArbitrageWitness& a) {
  return {{"h", ToJson(a.h)}, {"strict_outcome", market.space().label(a.strict_outcome)}};
}

// `prior` restricts the strict outcome to that measure's support; otherwise
// some prior vertex must charge it.
void ClaimArbitrage(Transcript* t, const std::string& name, const Market& market,
                    const Json& node, const std::string& path, const ProbabilityMeasure* prior) {
  const RationalVector h = Vec(node, "h", path, market.asset_count());
  const std::size_t strict = OutcomeOf(node, "strict_outcome", path, market.space());
  const RationalVector gains = market.Gains(h);
  const std::string& label = market.space().label(strict);
  t->Add(name + ": least gain on the quasi-sure support", MinOn(gains, market.support()),
         ">=", 0);
  t->Add(name + ": gain at " + label, gains[strict], ">", 0);
  Rational charge = 0;
  if (prior != nullptr) {
    charge = (*prior)[strict];
  } else {
    for (const ProbabilityMeasure& v : market.priors().vertices()) charge = std::max(charge, v[strict]);
  }
  t->Add(name + ": prior mass at " + label, charge, ">", 0);
}

std::pair<bool, Json> NaWitness(const Market& market) {
  NaResult r = CheckNa(market);
  if (!r.holds) return {false, ArbitrageJson(market, *r.witness)};
  std::optional<ProbabilityMeasure> q = EquivalentMartingaleMeasure(market);
  if (!q) throw InternalError("NA holds but no equivalent martingale measure was found");
  return {true, Json{{"martingale_measure", ToJson(*q)}}};
}

void ClaimNa(Transcript* t, const std::string& prefix, const Market& market, bool holds,
             const Json& node, const std::string& path) {
  if (!holds) {
    ClaimArbitrage(t, prefix + "arbitrage", market, node, path, nullptr);
    return;
  }
  const RationalVector q = Vec(node, "martingale_measure", path, market.outcome_count());
  const std::string name = prefix + "martingale measure";
  ClaimMartingaleMember(t, name, market, q);
  t->Add(name + ": least mass on the quasi-sure support", MinOn(q, market.support()), ">", 0);
}

// Q vertices of a market as carried in a witness; each is checked to be a
// martingale measure on the quasi-sure support.
AmbiguitySet ClaimQVertices(Transcript* t, const std::string& prefix, const Market& market,
                            const Json& node, const std::string& path) {
  std::vector<ProbabilityMeasure> vertices = Canon().Measures(
      Canon().Field(node, "q_vertices", path), path + ".q_vertices", market.outcome_count());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    ClaimMartingaleMember(t, prefix + "Q vertex " + Ordinal(i), market, vertices[i].masses());
  }
  return AmbiguitySet(std::move(vertices));
}

Json QVerticesJson(const AmbiguitySet& family) {
  Json out = Json::array();
  for (const ProbabilityMeasure& v : family.vertices()) out.push_back(ToJson(v));
  return out;
}

// ---- market commands ----

CommandResult RunCheckNa(const Json& inputs) {
  const Market market = LoadMarket(inputs);
  auto [holds, witness] = NaWitness(market);
  const std::string verdict = holds ? "NA holds" : "NA fails";
  CommandResult out{{{"na_holds", holds}, {"summary", verdict}}, witness, {"verdict: " + verdict}};
  if (holds) {
    out.summary.push_back("martingale measure: " +
                          Row(Vec(witness, "martingale_measure", "witness")));
  } else {
    out.summary.push_back("arbitrage H: " + Row(Vec(witness, "h", "witness")));
    out.summary.push_back("strict outcome: " + witness["strict_outcome"].get<std::string>());
  }
  return out;
}

void ClaimsCheckNa(const Json& inputs, const Json& verdict, const Json& witness,
                   Transcript* t) {
  const Market market = LoadMarket(inputs);
  ClaimNa(t, "", market, Flag(verdict, "na_holds", "verdict"), witness, "witness");
}

CommandResult RunMartingalePolytope(const Json& inputs) {
  const Market market = LoadMarket(inputs);
  MartingalePolytope polytope = ComputeMartingalePolytope(market, Cap(inputs));
  CommandResult out;
  if (polytope.empty()) {
    std::optional<RationalVector> h = StrictlyPositiveStrategy(market);
    if (!h) throw InternalError("empty martingale polytope without a separating strategy");
    out.verdict = {{"empty", true}, {"vertex_count", 0}, {"summary", "no martingale measure"}};
    out.witness = {{"h", ToJson(*h)}};
    out.summary = {"verdict: no martingale measure", "strictly positive strategy H: " + Row(*h)};
    return out;
  }
  Json vertices = Json::array();
  out.summary = {"verdict: " + std::to_string(polytope.vertices.size()) + " vertices"};
  for (const ProbabilityMeasure& q : polytope.vertices) {
    vertices.push_back(ToJson(q));
    out.summary.push_back("vertex: " + Row(q.masses()));
  }
  out.verdict = {{"empty", false},
                 {"vertex_count", polytope.vertices.size()},
                 {"summary", std::to_string(polytope.vertices.size()) + " vertices"}};
  out.witness = {{"vertices", vertices}};
  return out;
}

void ClaimsMartingalePolytope(const Json& inputs, const Json& verdict, const Json& witness,
                              Transcript* t) {
  const Market market = LoadMarket(inputs);
  const long long count = Int(verdict, "vertex_count", "verdict");
  if (Flag(verdict, "empty", "verdict")) {
    if (count != 0) Canon().Fail("verdict.vertex_count", "must be 0 for an empty polytope");
    const RationalVector h = Vec(witness, "h", "witness", market.asset_count());
    t->Add("strategy: least gain on the quasi-sure support",
           MinOn(market.Gains(h), market.support()), ">", 0);
    return;
  }
  const Json& vertices = Arr(witness, "vertices", "witness");
  if (count <= 0 || vertices.size() != static_cast<std::size_t>(count)) {
    Canon().Fail("verdict.vertex_count", "does not match the vertex list");
  }
  std::vector<RationalVector> seen;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string path = "witness.vertices[" + std::to_string(i) + "]";
    RationalVector q = Canon().Vector(vertices[i], path, market.outcome_count());
    if (std::find(seen.begin(), seen.end(), q) != seen.end()) Canon().Fail(path, "duplicate vertex");
    const std::string name = "vertex " + Ordinal(i);
    ClaimMartingaleMember(t, name, market, q);
    RationalMatrix columns;
    const OutcomeSet support = SupportOf(q);
    for (std::size_t w : support) {
      RationalVector column = market.increments()[w];
      column.push_back(1);
      columns.push_back(std::move(column));
    }
    t->Add(name + ": rank of the active columns", Rational(Rank(columns)), "==",
           Rational(support.size()));
    seen.push_back(std::move(q));
  }
}

CommandResult RunFtap(const Json& inputs) {
  const Market market = LoadMarket(inputs);
  FtapResult r = CheckFtap(market);
  auto [holds, na] = NaWitness(market);
  if (holds != r.na_holds) throw InternalError("NA verdicts disagree");
  Json per_vertex = Json::array();
  CommandResult out;
  const std::string verdict = r.na_equivalent
                                  ? "NA and prior domination agree"
                                  : "NA and prior domination disagree";
  out.summary = {std::string("NA: ") + (r.na_holds ? "holds" : "fails"),
                 std::string("every prior vertex dominated: ") +
                     (r.all_vertices_dominated ? "yes" : "no"),
                 "verdict: " + verdict};
  for (std::size_t i = 0; i < r.per_vertex.size(); ++i) {
    const FtapVertexResult& v = r.per_vertex[i];
    if (v.dominating_q) {
      per_vertex.push_back({{"dominating_q", ToJson(*v.dominating_q)},
                            {"q_dominated_by_priors", v.q_dominated_by_priors}});
      out.summary.push_back("prior vertex " + Ordinal(i) + ": dominating Q " +
                            Row(v.dominating_q->masses()));
    } else {
      per_vertex.push_back({{"obstruction", ArbitrageJson(market, *v.obstruction)}});
      out.summary.push_back("prior vertex " + Ordinal(i) + ": arbitrage H " +
                            Row(v.obstruction->h));
    }
  }
  out.verdict = {{"na_holds", r.na_holds},
                 {"all_vertices_dominated", r.all_vertices_dominated},
                 {"na_equivalent", r.na_equivalent},
                 {"summary", verdict}};
  out.witness = {{"na", na}, {"per_vertex", per_vertex}};
  return out;
}

void ClaimsFtap(const Json& inputs, const Json& verdict, const Json& witness, Transcript* t) {
  const Market market = LoadMarket(inputs);
  const bool na = Flag(verdict, "na_holds", "verdict");
  const bool dominated = Flag(verdict, "all_vertices_dominated", "verdict");
  if (Flag(verdict, "na_equivalent", "verdict") != (na == dominated)) {
    Canon().Fail("verdict.na_equivalent", "inconsistent with the other verdict fields");
  }
  ClaimNa(t, "NA: ", market, na, Canon().Field(witness, "na", "witness"), "witness.na");
  const Json& per_vertex = Arr(witness, "per_vertex", "witness");
  if (per_vertex.size() != market.priors().vertex_count()) {
    Canon().Fail("witness.per_vertex", "one entry per prior vertex expected");
  }
  bool all = true;
  for (std::size_t i = 0; i < per_vertex.size(); ++i) {
    const std::string path = "witness.per_vertex[" + std::to_string(i) + "]";
    const std::string name = "prior vertex " + Ordinal(i);
    const ProbabilityMeasure& prior = market.priors().vertex(i);
    const Json& node = per_vertex[i];
    if (Canon().Has(node, "dominating_q")) {
      const RationalVector q = Vec(node, "dominating_q", path, market.outcome_count());
      ClaimMeasure(t, name + ": dominating Q", q);
      ClaimMartingale(t, name + ": dominating Q", market, q);
      t->Add(name + ": least Q mass on the prior support", MinOn(q, prior.Support()), ">", 0);
      t->Add(name + ": Q mass off the quasi-sure support", MassOff(q, market.support()),
             Flag(node, "q_dominated_by_priors", path) ? "==" : ">", 0);
    } else {
      all = false;
      ClaimArbitrage(t, name + ": arbitrage", market, Canon().Field(node, "obstruction", path),
                     path + ".obstruction", &prior);
    }
  }
  if (all != dominated) Canon().Fail("verdict.all_vertices_dominated", "inconsistent with the witness");
}

RationalVector LoadPayoff(const Json& inputs, std::size_t size) {
  return Canon().Vector(Canon().Field(inputs, "payoff", "inputs"), "inputs.payoff", size);
}

CommandResult RunSuperhedge(const Json& inputs) {
  const Market market = LoadMarket(inputs);
  const RationalVector payoff = LoadPayoff(inputs, market.outcome_count());
  HedgeCertificate hedge = Superhedge(market, BoundedFunction(payoff), Cap(inputs));
  CommandResult out;
  out.verdict = {{"price", ToJson(hedge.price)}, {"summary", "price " + Fmt(hedge.price)}};
  out.witness = {{"h", ToJson(hedge.h)}, {"attaining_q", ToJson(hedge.attaining_q)}};
  out.summary = {"price: " + Fmt(hedge.price), "H: " + Row(hedge.h),
                 "attaining Q: " + Row(hedge.attaining_q.masses())};
  return out;
}

void ClaimsSuperhedge(const Json& inputs, const Json& verdict, const Json& witness,
                      Transcript* t) {
  const Market market = LoadMarket(inputs);
  const RationalVector payoff = LoadPayoff(inputs, market.outcome_count());
  const Rational price = Num(verdict, "price", "verdict");
  const RationalVector h = Vec(witness, "h", "witness", market.asset_count());
  const RationalVector q = Vec(witness, "attaining_q", "witness", market.outcome_count());
  const RationalVector gains = market.Gains(h);
  for (std::size_t w : market.support()) {
    t->Add("hedge at " + market.space().label(w) + ": price plus gain",
           price + gains[w], ">=", payoff[w]);
  }
  ClaimMartingaleMember(t, "attaining Q", market, q);
  t->Add("attaining Q: expected payoff", Dot(q, payoff), "==", price);
}

// ---- Halmos-Savage commands ----

struct HsFamilies {
  SampleSpace space;
  AmbiguitySet p;
  AmbiguitySet q;
  bool from_market = false;
};

HsFamilies FamiliesForRun(const Json& inputs) {
  if (Canon().Has(inputs, "pair")) {
    PairFile pair = PairFromJson(Canon(), inputs["pair"], "inputs.pair");
    return {pair.space, pair.p, pair.q, false};
  }
  const Market market = LoadMarket(inputs);
  return {market.space(), market.priors(), MartingaleFamily(market, Cap(inputs)), true};
}

Json FamiliesWitness(const HsFamilies& f) {
  Json out = Json::object();
  if (f.from_market) out["q_vertices"] = QVerticesJson(f.q);
  return out;
}

HsFamilies FamiliesForClaims(const Json& inputs, const Json& witness, Transcript* t) {
  if (Canon().Has(inputs, "pair")) {
    PairFile pair = PairFromJson(Canon(), inputs["pair"], "inputs.pair");
    return {pair.space, pair.p, pair.q, false};
  }
  const Market market = LoadMarket(inputs);
  AmbiguitySet q = ClaimQVertices(t, "", market, witness, "witness");
  return {market.space(), market.priors(), std::move(q), true};
}

EventScan PrimalHypothesisScan(const AmbiguitySet& p, const AmbiguitySet& q,
                               const Rational& epsilon, int cap) {
  return ScanEvents(p.QuasiSureSupport(), Masses(p), Agg::kMax, AtLeast(epsilon), Masses(q),
                    Agg::kMax, Agg::kMin, cap);
}

EventScan DualHypothesisScan(const AmbiguitySet& p, const AmbiguitySet& q,
                             const Rational& delta, int cap) {
  return ScanEvents(p.QuasiSureSupport(), Masses(p), Agg::kMin, Below(delta), Masses(q),
                    Agg::kMin, Agg::kMax, cap);
}

EventScan DualModulusScan(const AmbiguitySet& p, const AmbiguitySet& q,
                          const Rational& epsilon, int cap) {
  return ScanEvents(p.QuasiSureSupport(), Masses(q), Agg::kMin, AtLeast(epsilon), Masses(p),
                    Agg::kMin, Agg::kMin, cap);
}

Json CheckJson(const HypothesisCheck& c, const SampleSpace& space) {
  return {{"holds", c.holds},
          {"qualifying_sets", c.qualifying_sets},
          {"worst_set", c.worst_set ? EventToJson(*c.worst_set, space) : Json(nullptr)},
          {"worst_value", c.worst_set ? ToJson(c.worst_value) : Json(nullptr)}};
}

CommandResult RunHsCheck(const Json& inputs) {
  HsFamilies f = FamiliesForRun(inputs);
  const int cap = Cap(inputs);
  HsInstance instance(f.p, f.q, OptNumber(inputs, "epsilon"), OptNumber(inputs, "delta"));
  HypothesisCheck primal = CheckHypothesisPrimal(instance, cap);
  HypothesisCheck dual = CheckHypothesisDual(instance, cap);
  const std::string summary = std::string("primal hypothesis ") +
                              (primal.holds ? "holds" : "fails") + ", dual hypothesis " +
                              (dual.holds ? "holds" : "fails");
  CommandResult out;
  out.verdict = {{"primal", CheckJson(primal, f.space)},
                 {"dual", CheckJson(dual, f.space)},
                 {"summary", summary}};
  out.witness = FamiliesWitness(f);
  out.summary = {"verdict: " + summary};
  for (const auto& [name, c] : {std::pair{"primal", &primal}, std::pair{"dual", &dual}}) {
    if (c->worst_set) {
      out.summary.push_back(std::string(name) + " worst set: " + Labels(*c->worst_set, f.space) +
                            " with value " + Fmt(c->worst_value));
    }
  }
  return out;
}

void ClaimHypothesis(Transcript* t, const std::string& name, const EventScan& scan,
                     const Json& node, const std::string& path, const HsFamilies& f,
                     bool primal, const Rational& epsilon, const Rational& delta) {
  const bool holds = Flag(node, "holds", path);
  t->Add(name + ": qualifying events", Rational(scan.count), "==",
         Rational(static_cast<long>(Int(node, "qualifying_sets", path))));
  if (!scan.best) {
    RequireNull(node, "worst_set", path);
    RequireNull(node, "worst_value", path);
    if (!holds) Canon().Fail(path + ".holds", "no qualifying event, so the hypothesis holds");
    return;
  }
  const Rational worst = Num(node, "worst_value", path);
  OutcomeSet event = Canon().Event(Canon().Field(node, "worst_set", path), path + ".worst_set",
                                   f.space);
  if (!IsSubset(event, f.p.QuasiSureSupport())) {
    Canon().Fail(path + ".worst_set", "leaves the quasi-sure support");
  }
  std::vector<Rational> p_mass;
  std::vector<Rational> q_mass;
  for (const ProbabilityMeasure& v : f.p.vertices()) p_mass.push_back(v.Probability(event));
  for (const ProbabilityMeasure& v : f.q.vertices()) q_mass.push_back(v.Probability(event));
  if (primal) {
    t->Add(name + ": least max_Q Q(A) over events with max_P P(A) >= epsilon", *scan.best,
           "==", worst);
    t->Add(name + " worst set: max_P P(A)", Aggregate(p_mass, Agg::kMax), ">=", epsilon);
    t->Add(name + " worst set: max_Q Q(A)", Aggregate(q_mass, Agg::kMax), "==", worst);
    t->Add(name + ": worst value against delta", worst, holds ? ">=" : "<", delta);
  } else {
    t->Add(name + ": greatest min_Q Q(A) over events with min_P P(A) < delta", *scan.best,
           "==", worst);
    t->Add(name + " worst set: min_P P(A)", Aggregate(p_mass, Agg::kMin), "<", delta);
    t->Add(name + " worst set: min_Q Q(A)", Aggregate(q_mass, Agg::kMin), "==", worst);
    t->Add(name + ": worst value against epsilon", worst, holds ? "<" : ">=", epsilon);
  }
}

void ClaimsHsCheck(const Json& inputs, const Json& verdict, const Json& witness,
                   Transcript* t) {
  HsFamilies f = FamiliesForClaims(inputs, witness, t);
  const int cap = Cap(inputs);
  const Rational epsilon = OptNumber(inputs, "epsilon");
  const Rational delta = OptNumber(inputs, "delta");
  ClaimHypothesis(t, "primal", PrimalHypothesisScan(f.p, f.q, epsilon, cap),
                  Canon().Field(verdict, "primal", "verdict"), "verdict.primal", f, true,
                  epsilon, delta);
  ClaimHypothesis(t, "dual", DualHypothesisScan(f.p, f.q, delta, cap),
                  Canon().Field(verdict, "dual", "verdict"), "verdict.dual", f, false,
                  epsilon, delta);
}

std::size_t VertexOption(const Json& inputs, const AmbiguitySet& p) {
  const long long k = Canon().Integer(Option(inputs, "vertex"), "inputs.options.vertex");
  if (k < 1 || static_cast<std::size_t>(k) > p.vertex_count()) {
    Canon().Fail("inputs.options.vertex", "no such P vertex");
  }
  return static_cast<std::size_t>(k - 1);
}

CommandResult RunHsWitness(const Json& inputs, DSetKind kind) {
  HsFamilies f = FamiliesForRun(inputs);
  const int cap = Cap(inputs);
  HsInstance instance(f.p, f.q, OptNumber(inputs, "epsilon"), OptNumber(inputs, "delta"));
  const ProbabilityMeasure& p = f.p.vertex(VertexOption(inputs, f.p));
  HsWitness w = kind == DSetKind::kPrimal ? ConstructHsWitness(instance, p, cap)
                                          : ConstructDualHsWitness(instance, p, cap);
  CommandResult out;
  const std::string summary =
      w.vacuous ? "vacuous witness" : "Q* with bound " + Fmt(w.guaranteed_bound);
  out.verdict = {{"vacuous", w.vacuous},
                 {"guaranteed_bound", ToJson(w.guaranteed_bound)},
                 {"summary", summary}};
  out.witness = FamiliesWitness(f);
  out.witness["q_star"] = ToJson(w.q_star);
  out.witness["q_weights"] = ToJson(w.q_weights);
  out.summary = {"verdict: " + summary, "Q*: " + Row(w.q_star.masses()),
                 "weights over Q vertices: " + Row(w.q_weights)};
  return out;
}

void ClaimsHsWitness(const Json& inputs, const Json& verdict, const Json& witness,
                     Transcript* t, DSetKind kind) {
  HsFamilies f = FamiliesForClaims(inputs, witness, t);
  const int cap = Cap(inputs);
  const Rational epsilon = OptNumber(inputs, "epsilon");
  const Rational delta = OptNumber(inputs, "delta");
  const ProbabilityMeasure& p = f.p.vertex(VertexOption(inputs, f.p));
  const std::size_t n = f.space.size();
  const RationalVector q_star = Vec(witness, "q_star", "witness", n);
  const RationalVector weights = Vec(witness, "q_weights", "witness");
  const Rational bound = Num(verdict, "guaranteed_bound", "verdict");
  const bool vacuous = Flag(verdict, "vacuous", "verdict");
  const OutcomeSet support = f.p.QuasiSureSupport();
  ClaimMixture(t, "Q*", Masses(f.q), weights, q_star, "witness.q_weights");
  if (kind == DSetKind::kPrimal) {
    ClaimScan(t, "hypothesis: least max_Q Q(A) over events with max_P P(A) >= epsilon",
              PrimalHypothesisScan(f.p, f.q, epsilon, cap), ">=", delta);
    if (vacuous) {
      t->Add("vacuous: 2 epsilon", 2 * epsilon, ">", 1);
      t->Add("vacuous: guaranteed bound", bound, "==", 1);
      return;
    }
    t->Add("guaranteed bound against epsilon*delta/2", bound, ">=", epsilon * delta / 2);
    ClaimScan(t, "least Q*(A) over events with P(A) >= 2 epsilon",
              ScanEvents(support, {p.masses()}, Agg::kMax, AtLeast(2 * epsilon), {q_star},
                         Agg::kMax, Agg::kMin, cap),
              ">=", bound);
  } else {
    ClaimScan(t, "hypothesis: greatest min_Q Q(A) over events with min_P P(A) < delta",
              DualHypothesisScan(f.p, f.q, delta, cap), "<", epsilon);
    if (vacuous) {
      t->Add("vacuous: epsilon", epsilon, ">=", 1);
      t->Add("vacuous: guaranteed bound", bound, "==", 1);
      return;
    }
    t->Add("guaranteed bound against 2 epsilon", bound, "<", 2 * epsilon);
    ClaimScan(t, "greatest Q*(A) over events with P(A) < epsilon*delta",
              ScanEvents(support, {p.masses()}, Agg::kMax, Below(epsilon * delta), {q_star},
                         Agg::kMax, Agg::kMax, cap),
              "<=", bound);
  }
}

bool DualOption(const Json& inputs) {
  return Canon().Bool(Option(inputs, "dual"), "inputs.options.dual");
}

CommandResult RunHsModulus(const Json& inputs) {
  HsFamilies f = FamiliesForRun(inputs);
  const int cap = Cap(inputs);
  const Rational epsilon = OptNumber(inputs, "epsilon");
  if (epsilon <= 0) Canon().Fail("inputs.options.epsilon", "must be positive");
  ModulusResult r = DualOption(inputs) ? DualHsModulus(f.p, f.q, epsilon, cap)
                                       : HsModulus(f.p, f.q, epsilon, cap);
  CommandResult out;
  out.verdict = {{"delta", ToJson(r.delta)},
                 {"unconstrained", r.unconstrained()},
                 {"worst_set", r.worst_set ? EventToJson(*r.worst_set, f.space) : Json(nullptr)},
                 {"summary", "delta " + Fmt(r.delta)}};
  out.witness = FamiliesWitness(f);
  out.summary = {"delta: " + Fmt(r.delta)};
  if (r.worst_set) out.summary.push_back("worst set: " + Labels(*r.worst_set, f.space));
  if (r.unconstrained()) out.summary.push_back("no event qualifies");
  return out;
}

void ClaimsHsModulus(const Json& inputs, const Json& verdict, const Json& witness,
                     Transcript* t) {
  HsFamilies f = FamiliesForClaims(inputs, witness, t);
  const int cap = Cap(inputs);
  const Rational epsilon = OptNumber(inputs, "epsilon");
  const bool dual = DualOption(inputs);
  const Rational delta = Num(verdict, "delta", "verdict");
  const EventScan scan = dual ? DualModulusScan(f.p, f.q, epsilon, cap)
                              : PrimalHypothesisScan(f.p, f.q, epsilon, cap);
  const bool unconstrained = Flag(verdict, "unconstrained", "verdict");
  if (!scan.best) {
    if (!unconstrained) Canon().Fail("verdict.unconstrained", "no event qualifies");
    RequireNull(verdict, "worst_set", "verdict");
    t->Add("qualifying events", Rational(scan.count), "==", 0);
    t->Add("unconstrained: delta", delta, "==", ModulusSentinel());
    return;
  }
  if (unconstrained) Canon().Fail("verdict.unconstrained", "some event qualifies");
  const OutcomeSet event =
      Canon().Event(Canon().Field(verdict, "worst_set", "verdict"), "verdict.worst_set", f.space);
  if (!IsSubset(event, f.p.QuasiSureSupport())) {
    Canon().Fail("verdict.worst_set", "leaves the quasi-sure support");
  }
  std::vector<Rational> p_mass;
  std::vector<Rational> q_mass;
  for (const ProbabilityMeasure& v : f.p.vertices()) p_mass.push_back(v.Probability(event));
  for (const ProbabilityMeasure& v : f.q.vertices()) q_mass.push_back(v.Probability(event));
  if (dual) {
    t->Add("least min_P P(A) over events with min_Q Q(A) >= epsilon", *scan.best, "==", delta);
    t->Add("worst set: min_Q Q(A)", Aggregate(q_mass, Agg::kMin), ">=", epsilon);
    t->Add("worst set: min_P P(A)", Aggregate(p_mass, Agg::kMin), "==", delta);
  } else {
    t->Add("least max_Q Q(A) over events with max_P P(A) >= epsilon", *scan.best, "==", delta);
    t->Add("worst set: max_P P(A)", Aggregate(p_mass, Agg::kMax), ">=", epsilon);
    t->Add("worst set: max_Q Q(A)", Aggregate(q_mass, Agg::kMax), "==", delta);
  }
}

// ---- large-market commands ----

enum class AaKind { kFirst, kSecond };

std::string ScheduleKey(AaKind kind) {
  return kind == AaKind::kFirst ? "c_schedule" : "target_levels";
}

Rational LevelMass(std::span<const Rational> q, std::span<const Rational> gains,
                   const Rational& alpha) {
  Rational mass = 0;
  for (std::size_t w = 0; w < gains.size(); ++w) {
    if (gains[w] >= alpha) mass += q[w];
  }
  return mass;
}

CommandResult RunScan(const Json& inputs, AaKind kind) {
  LoadedSequence loaded = LoadSequence(inputs);
  const MarketSequence& seq = loaded.sequence;
  const int cap = Cap(inputs);
  const RationalVector grid = OptVector(inputs, "alpha_grid");
  const RationalVector schedule = OptVector(inputs, ScheduleKey(kind));
  std::optional<AaWitness> found = kind == AaKind::kFirst
                                       ? ScanAa1(seq, grid, schedule, cap)
                                       : ScanAa2(seq, grid, schedule, cap);
  const std::string name = kind == AaKind::kFirst ? "AA1" : "AA2";
  CommandResult out;
  Json steps = Json::array();
  if (!found) {
    out.verdict = {{"found", false},
                   {"alpha", nullptr},
                   {"summary", "no " + name + " witness on the grid"}};
    out.witness = {{"steps", steps}};
    out.summary = {"verdict: no " + name + " witness on the grid"};
    return out;
  }
  out.summary = {"verdict: " + name + " witness at alpha = " + Fmt(found->alpha)};
  for (const AaStep& step : found->steps) {
    const Market& market = seq.market(step.market_index);
    Json node = {{"market", step.market_index + 1},
                 {"h", ToJson(step.h)},
                 {"event", EventToJson(step.event, market.space())},
                 {"prior_weights", ToJson(step.prior_weights)},
                 {"prior", ToJson(step.prior)},
                 {"lower_bound", ToJson(step.lower_bound)},
                 {"probability", ToJson(step.probability)},
                 {"level", ToJson(step.level)}};
    if (kind == AaKind::kFirst) {
      node["q_vertices"] =
          QVerticesJson(MartingaleFamily(market, seq.CapFor(step.market_index, cap)));
    }
    steps.push_back(std::move(node));
    out.summary.push_back("market " + Ordinal(step.market_index) + ": H " + Row(step.h) +
                          ", P(X >= alpha) = " + Fmt(step.probability));
  }
  out.verdict = {{"found", true},
                 {"alpha", ToJson(found->alpha)},
                 {"summary", name + " witness at alpha = " + Fmt(found->alpha)}};
  out.witness = {{"steps", steps}};
  return out;
}

void ClaimsScan(const Json& inputs, const Json& verdict, const Json& witness, Transcript* t,
                AaKind kind) {
  LoadedSequence loaded = LoadSequence(inputs);
  const MarketSequence& seq = loaded.sequence;
  const RationalVector grid = OptVector(inputs, "alpha_grid");
  const RationalVector schedule = OptVector(inputs, ScheduleKey(kind));
  const Json& steps = Arr(witness, "steps", "witness");
  if (!Flag(verdict, "found", "verdict")) {
    RequireNull(verdict, "alpha", "verdict");
    if (!steps.empty()) Canon().Fail("witness.steps", "must be empty without a witness");
    return;
  }
  const Rational alpha = Num(verdict, "alpha", "verdict");
  if (std::find(grid.begin(), grid.end(), alpha) == grid.end()) {
    Canon().Fail("verdict.alpha", "not on the alpha grid");
  }
  t->Add("alpha", alpha, ">", 0);
  if (steps.size() != schedule.size()) Canon().Fail("witness.steps", "one step per schedule entry");
  long long previous = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string path = "witness.steps[" + std::to_string(k) + "]";
    const std::string name = "step " + Ordinal(k);
    const Json& node = steps[k];
    const long long index = Int(node, "market", path);
    if (index <= previous || static_cast<std::size_t>(index) > seq.size()) {
      Canon().Fail(path + ".market", "market numbers must increase within the sequence");
    }
    previous = index;
    const Market& market = seq.market(static_cast<std::size_t>(index - 1));
    const std::size_t n = market.outcome_count();
    const RationalVector h = Vec(node, "h", path, market.asset_count());
    const RationalVector weights = Vec(node, "prior_weights", path);
    const RationalVector prior = Vec(node, "prior", path, n);
    const Rational lower = Num(node, "lower_bound", path);
    const Rational probability = Num(node, "probability", path);
    const Rational level = Num(node, "level", path);
    const OutcomeSet event =
        Canon().Event(Canon().Field(node, "event", path), path + ".event", market.space());
    if (event.empty() || !IsSubset(event, market.support())) {
      Canon().Fail(path + ".event", "must be a nonempty part of the quasi-sure support");
    }
    ClaimMixture(t, name + ": prior", Masses(market.priors()), weights, prior,
                 path + ".prior_weights");
    t->Add(name + ": level", level, "==", schedule[k]);
    t->Add(name + ": lower bound", lower, "==",
           kind == AaKind::kFirst ? schedule[k] : Rational(1));
    const RationalVector gains = market.Gains(h);
    t->Add(name + ": least gain on the quasi-sure support", MinOn(gains, market.support()),
           ">=", -lower);
    t->Add(name + ": least gain on the event", MinOn(gains, event), ">=", alpha);
    t->Add(name + ": P(X >= alpha)", LevelMass(prior, gains, alpha), "==", probability);
    t->Add(name + ": probability against the required level", probability, ">=",
           kind == AaKind::kFirst ? alpha : level);
    if (kind == AaKind::kFirst) {
      AmbiguitySet q = ClaimQVertices(t, name + ": ", market, node, path);
      Rational most = 0;
      for (const ProbabilityMeasure& v : q.vertices()) {
        most = std::max(most, LevelMass(v.masses(), gains, alpha));
      }
      t->Add(name + ": alpha times max_Q Q(X >= alpha)", alpha * most, "<=", lower);
    }
  }
}

CommandResult RunCertify(const Json& inputs, DSetKind kind) {
  LoadedSequence loaded = LoadSequence(inputs);
  const MarketSequence& seq = loaded.sequence;
  const int cap = Cap(inputs);
  const RationalVector grid = OptVector(inputs, "epsilon_grid");
  ModulusTable table = CertifyModuli(seq, grid, kind, cap);
  const std::string name = kind == DSetKind::kPrimal ? "NAA1" : "NAA2";
  const std::string summary = table.certified() ? name + " certified on the grid"
                                                : name + " not certified on the grid";
  CommandResult out;
  Json markets = Json::array();
  for (std::size_t n = 0; n < seq.size(); ++n) {
    markets.push_back({{"q_vertices", QVerticesJson(MartingaleFamily(seq.market(n),
                                                                     seq.CapFor(n, cap)))},
                       {"moduli", ToJson(table.per_market[n])}});
  }
  out.verdict = {{"certified", table.certified()},
                 {"uniform_delta", ToJson(table.uniform_delta)},
                 {"summary", summary}};
  out.witness = {{"markets", markets}};
  out.summary = {"verdict: " + summary};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out.summary.push_back("epsilon " + Fmt(grid[j]) + ": uniform delta " +
                          Fmt(table.uniform_delta[j]));
  }
  return out;
}

void ClaimsCertify(const Json& inputs, const Json& verdict, const Json& witness, Transcript* t,
                   DSetKind kind) {
  LoadedSequence loaded = LoadSequence(inputs);
  const MarketSequence& seq = loaded.sequence;
  const int cap = Cap(inputs);
  const RationalVector grid = OptVector(inputs, "epsilon_grid");
  const RationalVector uniform = Vec(verdict, "uniform_delta", "verdict", grid.size());
  const Json& markets = Arr(witness, "markets", "witness");
  if (markets.size() != seq.size()) Canon().Fail("witness.markets", "one entry per market");
  RationalVector least(grid.size(), ModulusSentinel());
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const std::string path = "witness.markets[" + std::to_string(n) + "]";
    const std::string name = "market " + Ordinal(n);
    const Market& market = seq.market(n);
    const int market_cap = seq.CapFor(n, cap);
    AmbiguitySet q = ClaimQVertices(t, name + ": ", market, markets[n], path);
    const RationalVector moduli = Vec(markets[n], "moduli", path, grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const std::string at = name + ", epsilon " + Fmt(grid[j]) + ": modulus";
      const EventScan scan = kind == DSetKind::kPrimal
                                 ? PrimalHypothesisScan(market.priors(), q, grid[j], market_cap)
                                 : DualModulusScan(market.priors(), q, grid[j], market_cap);
      if (scan.best) {
        t->Add(at, *scan.best, "==", moduli[j]);
      } else {
        t->Add(at + ": qualifying events", Rational(scan.count), "==", 0);
        t->Add(at + ": unconstrained", moduli[j], "==", ModulusSentinel());
      }
      least[j] = std::min(least[j], moduli[j]);
    }
  }
  const bool certified = Flag(verdict, "certified", "verdict");
  bool all_positive = true;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const std::string name = "epsilon " + Fmt(grid[j]) + ": uniform delta";
    t->Add(name, least[j], "==", uniform[j]);
    const bool positive = uniform[j] > 0;
    all_positive = all_positive && positive;
    if (certified || !positive) t->Add(name + " sign", uniform[j], positive ? ">" : "<=", 0);
  }
  if (certified != all_positive) Canon().Fail("verdict.certified", "inconsistent with uniform_delta");
}

void ClaimPrior(Transcript* t, const std::string& name, const LoadedSequence& loaded,
                std::size_t n, const RationalVector& prior) {
  t->Add(name + ": distance to the chosen prior", Distance(PriorOf(loaded, n).masses(), prior),
         "==", 0);
}

CommandResult RunBuildContiguous(const Json& inputs) {
  LoadedSequence loaded = LoadSequence(inputs);
  const MarketSequence& seq = loaded.sequence;
  const int cap = Cap(inputs);
  ContiguousSequence cs = BuildContiguousSequence(seq, loaded.priors, cap);
  CommandResult out;
  Json markets = Json::array();
  out.summary = {"verdict: contiguous sequence over " + std::to_string(seq.size()) + " markets"};
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const ContiguousEntry& entry = cs.entries[n];
    Json components = Json::array();
    for (const ContiguousComponent& c : entry.components) {
      components.push_back({{"weight", ToJson(c.weight)},
                            {"q_star", ToJson(c.witness.q_star)},
                            {"q_weights", ToJson(c.witness.q_weights)}});
    }
    markets.push_back({{"q_vertices", QVerticesJson(MartingaleFamily(seq.market(n),
                                                                     seq.CapFor(n, cap)))},
                       {"prior", ToJson(entry.prior)},
                       {"q", ToJson(entry.q)},
                       {"components", components}});
    out.summary.push_back("market " + Ordinal(n) + ": Q " + Row(entry.q.masses()));
  }
  out.verdict = {{"epsilons", ToJson(cs.epsilons)},
                 {"deltas", ToJson(cs.deltas)},
                 {"summary", "contiguous sequence built"}};
  out.witness = {{"markets", markets}};
  return out;
}

void ClaimsBuildContiguous(const Json& inputs, const Json& verdict, const Json& witness,
                           Transcript* t) {
  LoadedSequence loaded = LoadSequence(inputs);
  const MarketSequence& seq = loaded.sequence;
  const int cap = Cap(inputs);
  const std::size_t count = seq.size();
  const RationalVector eps = Vec(verdict, "epsilons", "verdict", count);
  const RationalVector deltas = Vec(verdict, "deltas", "verdict", count);
  for (std::size_t m = 1; m <= count; ++m) {
    const std::string name = "m = " + std::to_string(m);
    t->Add(name + ": epsilon", eps[m - 1], "==", Rational(1, m));
    t->Add(name + ": delta", deltas[m - 1], ">", 0);
    t->Add(name + ": delta cap", deltas[m - 1], "<=", 1);
  }
  const Json& markets = Arr(witness, "markets", "witness");
  if (markets.size() != count) Canon().Fail("witness.markets", "one entry per market");
  for (std::size_t n = 0; n < count; ++n) {
    const std::string path = "witness.markets[" + std::to_string(n) + "]";
    const std::string name = "market " + Ordinal(n);
    const Market& market = seq.market(n);
    const int market_cap = seq.CapFor(n, cap);
    const std::size_t size = market.outcome_count();
    const Json& node = markets[n];
    AmbiguitySet q_family = ClaimQVertices(t, name + ": ", market, node, path);
    const std::vector<RationalVector> q_vertices = Masses(q_family);
    for (std::size_t m = 1; m <= count; ++m) {
      ClaimScan(t, name + ", m = " + std::to_string(m) + ": hypothesis",
                PrimalHypothesisScan(market.priors(), q_family, eps[m - 1], market_cap), ">=",
                deltas[m - 1]);
    }
    const RationalVector prior = Vec(node, "prior", path, size);
    ClaimPrior(t, name + ": prior", loaded, n, prior);
    const RationalVector q = Vec(node, "q", path, size);
    const Json& components = Arr(node, "components", path);
    const std::size_t horizon = n + 1;
    if (components.size() != horizon) Canon().Fail(path + ".components", "one per m <= n");
    const Rational scale = 1 / (1 - Power2Inverse(horizon));
    Rational total = 0;
    RationalVector mixed(size, 0);
    for (std::size_t m = 1; m <= horizon; ++m) {
      const std::string at = path + ".components[" + std::to_string(m - 1) + "]";
      const std::string cname = name + ", m = " + std::to_string(m);
      const Rational weight = Num(components[m - 1], "weight", at);
      const RationalVector q_star = Vec(components[m - 1], "q_star", at, size);
      const RationalVector q_weights = Vec(components[m - 1], "q_weights", at);
      t->Add(cname + ": weight", weight, "==", scale * Power2Inverse(m));
      ClaimMixture(t, cname + ": Q*", q_vertices, q_weights, q_star, at + ".q_weights");
      const Rational& e = eps[m - 1];
      ClaimScan(t, cname + ": least Q*(A) over events with P(A) >= 2 epsilon",
                ScanEvents(market.support(), {prior}, Agg::kMax, AtLeast(2 * e), {q_star},
                           Agg::kMax, Agg::kMin, market_cap),
                ">=", e * deltas[m - 1] / 2);
      total += weight;
      for (std::size_t w = 0; w < size; ++w) mixed[w] += weight * q_star[w];
    }
    t->Add(name + ": total weight", total, "==", 1);
    t->Add(name + ": Q distance to the component mixture", Distance(mixed, q), "==", 0);
    ClaimMartingaleMember(t, name + ": Q", market, q);
    for (std::size_t m = 1; m <= horizon; ++m) {
      const Rational& e = eps[m - 1];
      ClaimScan(t, name + ", m = " + std::to_string(m) + ": least Q(A) over events with P(A) >= 2 epsilon",
                ScanEvents(market.support(), {prior}, Agg::kMax, AtLeast(2 * e), {q}, Agg::kMax,
                           Agg::kMin, market_cap),
                ">=", e * deltas[m - 1] / 2 * Power2Inverse(m));
    }
  }
}

CommandResult RunWeakContiguity(const Json& inputs) {
  LoadedSequence loaded = LoadSequence(inputs);
  const MarketSequence& seq = loaded.sequence;
  const int cap = Cap(inputs);
  WeakContiguityWitness w =
      BuildWeakContiguityWitness(seq, OptNumber(inputs, "epsilon"), loaded.priors, cap);
  CommandResult out;
  Json markets = Json::array();
  for (std::size_t n = 0; n < seq.size(); ++n) {
    markets.push_back({{"q_vertices", QVerticesJson(MartingaleFamily(seq.market(n),
                                                                     seq.CapFor(n, cap)))},
                       {"prior", ToJson(w.priors[n])},
                       {"q_star", ToJson(w.per_market[n].q_star)},
                       {"q_weights", ToJson(w.per_market[n].q_weights)}});
  }
  const std::string summary = "delta " + Fmt(w.delta) + " for epsilon " + Fmt(w.epsilon);
  out.verdict = {{"epsilon", ToJson(w.epsilon)},
                 {"inner_epsilon", ToJson(w.inner_epsilon)},
                 {"inner_delta", ToJson(w.inner_delta)},
                 {"delta", ToJson(w.delta)},
                 {"summary", summary}};
  out.witness = {{"markets", markets}};
  out.summary = {"verdict: " + summary, "inner epsilon: " + Fmt(w.inner_epsilon),
                 "inner delta: " + Fmt(w.inner_delta)};
  return out;
}

void ClaimsWeakContiguity(const Json& inputs, const Json& verdict, const Json& witness,
                          Transcript* t) {
  LoadedSequence loaded = LoadSequence(inputs);
  const MarketSequence& seq = loaded.sequence;
  const int cap = Cap(inputs);
  const Rational epsilon = Num(verdict, "epsilon", "verdict");
  const Rational inner_epsilon = Num(verdict, "inner_epsilon", "verdict");
  const Rational inner_delta = Num(verdict, "inner_delta", "verdict");
  const Rational delta = Num(verdict, "delta", "verdict");
  t->Add("epsilon", epsilon, "==", OptNumber(inputs, "epsilon"));
  t->Add("inner epsilon", inner_epsilon, ">", 0);
  t->Add("inner epsilon against epsilon/2", inner_epsilon, "<=", epsilon / 2);
  t->Add("inner delta", inner_delta, ">", 0);
  t->Add("inner delta cap", inner_delta, "<=", 1);
  t->Add("delta", delta, "==", std::min(Rational(inner_epsilon * inner_delta), Rational(1)));
  const Json& markets = Arr(witness, "markets", "witness");
  if (markets.size() != seq.size()) Canon().Fail("witness.markets", "one entry per market");
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const std::string path = "witness.markets[" + std::to_string(n) + "]";
    const std::string name = "market " + Ordinal(n);
    const Market& market = seq.market(n);
    const int market_cap = seq.CapFor(n, cap);
    const Json& node = markets[n];
    AmbiguitySet q_family = ClaimQVertices(t, name + ": ", market, node, path);
    ClaimScan(t, name + ": least min_P P(A) over events with min_Q Q(A) >= inner epsilon",
              DualModulusScan(market.priors(), q_family, inner_epsilon, market_cap), ">=",
              inner_delta);
    const RationalVector prior = Vec(node, "prior", path, market.outcome_count());
    ClaimPrior(t, name + ": prior", loaded, n, prior);
    const RationalVector q_star = Vec(node, "q_star", path, market.outcome_count());
    ClaimMixture(t, name + ": Q*", Masses(q_family), Vec(node, "q_weights", path), q_star,
                 path + ".q_weights");
    ClaimScan(t, name + ": greatest Q*(A) over events with P(A) < delta",
              ScanEvents(market.support(), {prior}, Agg::kMax, Below(delta), {q_star},
                         Agg::kMax, Agg::kMax, market_cap),
              "<", epsilon);
  }
}

// ---- dispatch ----

struct Entry {
  std::function<CommandResult(const Json&)> run;
  std::function<void(const Json&, const Json&, const Json&, Transcript*)> claims;
  bool large_market = false;
};

const std::map<std::string, Entry>& Registry() {
  static const std::map<std::string, Entry> registry = {
      {"check-na", {RunCheckNa, ClaimsCheckNa}},
      {"martingale-polytope", {RunMartingalePolytope, ClaimsMartingalePolytope}},
      {"ftap", {RunFtap, ClaimsFtap}},
      {"superhedge", {RunSuperhedge, ClaimsSuperhedge}},
      {"hs-check", {RunHsCheck, ClaimsHsCheck}},
      {"hs-witness",
       {[](const Json& i) { return RunHsWitness(i, DSetKind::kPrimal); },
        [](const Json& i, const Json& v, const Json& w, Transcript* t) {
          ClaimsHsWitness(i, v, w, t, DSetKind::kPrimal);
        }}},
      {"hs-dual-witness",
       {[](const Json& i) { return RunHsWitness(i, DSetKind::kDual); },
        [](const Json& i, const Json& v, const Json& w, Transcript* t) {
          ClaimsHsWitness(i, v, w, t, DSetKind::kDual);
        }}},
      {"hs-modulus", {RunHsModulus, ClaimsHsModulus}},
      {"scan-aa1",
       {[](const Json& i) { return RunScan(i, AaKind::kFirst); },
        [](const Json& i, const Json& v, const Json& w, Transcript* t) {
          ClaimsScan(i, v, w, t, AaKind::kFirst);
        },
        true}},
      {"scan-aa2",
       {[](const Json& i) { return RunScan(i, AaKind::kSecond); },
        [](const Json& i, const Json& v, const Json& w, Transcript* t) {
          ClaimsScan(i, v, w, t, AaKind::kSecond);
        },
        true}},
      {"certify-naa1",
       {[](const Json& i) { return RunCertify(i, DSetKind::kPrimal); },
        [](const Json& i, const Json& v, const Json& w, Transcript* t) {
          ClaimsCertify(i, v, w, t, DSetKind::kPrimal);
        },
        true}},
      {"certify-naa2",
       {[](const Json& i) { return RunCertify(i, DSetKind::kDual); },
        [](const Json& i, const Json& v, const Json& w, Transcript* t) {
          ClaimsCertify(i, v, w, t, DSetKind::kDual);
        },
        true}},
      {"build-contiguous", {RunBuildContiguous, ClaimsBuildContiguous, true}},
      {"weak-contiguity", {RunWeakContiguity, ClaimsWeakContiguity, true}},
  };
  return registry;
}

const Entry& Lookup(const std::string& command) {
  auto it = Registry().find(command);
  if (it == Registry().end()) throw InvalidInput("unknown command '" + command + "'");
  return it->second;
}

}  // namespace

const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> names = {
      "check-na",   "martingale-polytope", "ftap",         "superhedge",
      "hs-check",   "hs-witness",          "hs-dual-witness", "hs-modulus",
      "scan-aa1",   "scan-aa2",            "certify-naa1", "certify-naa2",
      "build-contiguous", "weak-contiguity"};
  return names;
}

bool IsKnownCommand(const std::string& command) { return Registry().contains(command); }

bool IsLargeMarketCommand(const std::string& command) {
  return IsKnownCommand(command) && Lookup(command).large_market;
}

CommandResult Execute(const std::string& command, const Json& inputs) {
  return Lookup(command).run(inputs);
}

void BuildClaims(const std::string& command, const Json& inputs, const Json& verdict,
                 const Json& witness, Transcript* transcript) {
  Lookup(command).claims(inputs, verdict, witness, transcript);
}

}  // namespace robust_ftap::cli
