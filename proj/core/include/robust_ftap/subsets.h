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

#ifndef ROBUST_FTAP_SUBSETS_H_
#define ROBUST_FTAP_SUBSETS_H_

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "robust_ftap/measures.h"
#include "robust_ftap/rational.h"

namespace robust_ftap {

inline constexpr int kDefaultEnumerationCap = 20;
// Masks are 64-bit, so no cap can go beyond this.
inline constexpr int kHardEnumerationLimit = 40;

// Bit i of a mask selects support[i].
using SubsetMask = std::uint64_t;

// Throws EnumerationCapExceeded if 2^support_size subsets exceed the cap.
void CheckEnumerationCap(std::size_t support_size, int cap);

OutcomeSet MaskToOutcomes(SubsetMask mask, const OutcomeSet& support);

// Visits every subset of `support` exactly once in Gray-code order. For each
// subset the callback receives the mask and, for every measure in `measures`
// (full-space mass vectors), the mass it puts on the subset. The empty set
// is visited first.
template <typename Visitor>
void ForEachSubset(const OutcomeSet& support,
                   std::span<const RationalVector* const> measures, int cap,
                   Visitor&& visit) {
  CheckEnumerationCap(support.size(), cap);
  const std::size_t k = support.size();
  std::vector<Rational> sums(measures.size(), 0);
  SubsetMask mask = 0;
  const SubsetMask count = SubsetMask{1} << k;
  visit(mask, std::span<const Rational>(sums));
  for (SubsetMask i = 1; i < count; ++i) {
    const int bit = std::countr_zero(i);
    const SubsetMask flag = SubsetMask{1} << bit;
    const bool adding = (mask & flag) == 0;
    mask ^= flag;
    const std::size_t outcome = support[bit];
    for (std::size_t j = 0; j < measures.size(); ++j) {
      const Rational& m = (*measures[j])[outcome];
      if (adding) {
        sums[j] += m;
      } else {
        sums[j] -= m;
      }
    }
    visit(mask, std::span<const Rational>(sums));
  }
}

}  // namespace robust_ftap

#endif  // ROBUST_FTAP_SUBSETS_H_
