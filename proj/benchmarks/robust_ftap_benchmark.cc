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

#include <benchmark/benchmark.h>

#include <random>

#include "robust_ftap/halmos_savage.h"
#include "robust_ftap/lp.h"
#include "robust_ftap/market.h"
#include "robust_ftap/subsets.h"

namespace robust_ftap {
namespace {

Rational RandomEntry(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-10, 10), den(1, 10);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

ProbabilityMeasure RandomMeasure(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> w(1, 9);
  RationalVector m(n);
  for (auto& x : m) x = w(rng);
  const Rational total = Sum(m);
  for (auto& x : m) x /= total;
  return ProbabilityMeasure(m);
}

void BM_SolveLp(benchmark::State& state) {
  const std::size_t n = state.range(0);
  std::mt19937 rng(1);
  LinearProgram lp;
  for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(RandomEntry(rng));
  lp.bounds.assign(n, VariableBounds::Box(-1, 1));
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector row(n);
    for (auto& x : row) x = RandomEntry(rng);
    lp.AddConstraint(row, Relation::kLessEqual, 1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(SolveLp(lp).value);
}
BENCHMARK(BM_SolveLp)->Arg(4)->Arg(8)->Arg(16);

void BM_SubsetEnumeration(benchmark::State& state) {
  const std::size_t n = state.range(0);
  std::mt19937 rng(2);
  ProbabilityMeasure p = RandomMeasure(rng, n), q = RandomMeasure(rng, n);
  OutcomeSet support(n);
  for (std::size_t i = 0; i < n; ++i) support[i] = i;
  const std::vector<const RationalVector*> measures = {&p.masses(), &q.masses()};
  for (auto _ : state) {
    std::uint64_t count = 0;
    ForEachSubset(support, measures, static_cast<int>(n),
                  [&](SubsetMask, std::span<const Rational> sums) {
                    if (sums[0] >= sums[1]) ++count;
                  });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_SubsetEnumeration)->Arg(8)->Arg(12)->Arg(16);

void BM_HsWitness(benchmark::State& state) {
  const std::size_t n = state.range(0);
  std::mt19937 rng(3);
  AmbiguitySet p({RandomMeasure(rng, n), RandomMeasure(rng, n)});
  AmbiguitySet q({RandomMeasure(rng, n), RandomMeasure(rng, n), RandomMeasure(rng, n)});
  const Rational eps(1, 5);
  const Rational delta = std::min(HsModulus(p, q, eps).delta, Rational(1));
  HsInstance instance(p, q, eps, delta);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ConstructHsWitness(instance, p.vertex(0)).guaranteed_bound);
  }
}
BENCHMARK(BM_HsWitness)->Arg(4)->Arg(8);

void BM_MartingalePolytope(benchmark::State& state) {
  const std::size_t n = state.range(0);
  std::mt19937 rng(4);
  RationalMatrix s1(n, RationalVector(2));
  for (auto& row : s1) for (auto& x : row) x = RandomEntry(rng);
  Market market(SampleSpace([n] {
                  std::vector<std::string> labels;
                  for (std::size_t i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
                  return labels;
                }()),
                RationalVector(2, 0), s1, AmbiguitySet({ProbabilityMeasure::Uniform(n)}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeMartingalePolytope(market).vertices.size());
  }
}
BENCHMARK(BM_MartingalePolytope)->Arg(6)->Arg(10);

}  // namespace
}  // namespace robust_ftap

BENCHMARK_MAIN();
