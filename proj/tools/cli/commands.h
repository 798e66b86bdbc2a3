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

#ifndef ROBUST_FTAP_CLI_COMMANDS_H_
#define ROBUST_FTAP_CLI_COMMANDS_H_

#include <string>
#include <vector>

#include "certificate.h"
#include "io.h"

namespace robust_ftap::cli {

struct CommandResult {
  Json verdict;
  Json witness;
  std::vector<std::string> summary;  // lines for text output
};

const std::vector<std::string>& CommandNames();
bool IsKnownCommand(const std::string& command);
// Commands over market sequences; their certificates only cover the given
// finite prefix.
bool IsLargeMarketCommand(const std::string& command);

// Runs `command` on canonical inputs: {"market" | "pair" | "sequence",
// optional "payoff", "options"}.
CommandResult Execute(const std::string& command, const Json& inputs);

// Recomputes every claim of a certificate from its inputs, verdict and
// witness without repeating the search that produced the witness. Malformed
// or inconsistent payloads raise InvalidInput.
void BuildClaims(const std::string& command, const Json& inputs, const Json& verdict,
                 const Json& witness, Transcript* transcript);

}  // namespace robust_ftap::cli

#endif  // ROBUST_FTAP_CLI_COMMANDS_H_
