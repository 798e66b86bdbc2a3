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

#ifndef ROBUST_FTAP_CLI_RUN_H_
#define ROBUST_FTAP_CLI_RUN_H_

#include <ostream>
#include <string>
#include <vector>

#include "robust_ftap/errors.h"

namespace robust_ftap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitCap = 2;
inline constexpr int kExitInternal = 3;

int ExitCodeFor(ErrorKind kind);

// `args` excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robust_ftap::cli

#endif  // ROBUST_FTAP_CLI_RUN_H_
