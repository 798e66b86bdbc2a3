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

#include "robust_ftap/subsets.h"

#include <algorithm>
#include <string>

#include "robust_ftap/errors.h"

namespace robust_ftap {

void CheckEnumerationCap(std::size_t support_size, int cap) {
  const int limit = std::min(cap, kHardEnumerationLimit);
  if (static_cast<long>(support_size) > limit) {
    throw EnumerationCapExceeded(
        "quasi-sure support has " + std::to_string(support_size) +
        " outcomes; subset enumeration is capped at " + std::to_string(limit));
  }
}

OutcomeSet MaskToOutcomes(SubsetMask mask, const OutcomeSet& support) {
  OutcomeSet out;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (mask & (SubsetMask{1} << i)) out.push_back(support[i]);
  }
  return out;
}

}  // namespace robust_ftap
