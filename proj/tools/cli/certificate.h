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

#ifndef ROBUST_FTAP_CLI_CERTIFICATE_H_
#define ROBUST_FTAP_CLI_CERTIFICATE_H_

#include <optional>
#include <string>
#include <vector>

#include "io.h"
#include "robust_ftap/rational.h"

namespace robust_ftap::cli {

// One asserted relation between two exact values.
struct Claim {
  std::string name;
  Rational lhs;
  std::string relation;  // one of == >= <= > <
  Rational rhs;

  bool Holds() const;
  bool operator==(const Claim&) const = default;
};

class Transcript {
 public:
  void Add(std::string name, Rational lhs, std::string relation, Rational rhs);
  const std::vector<Claim>& claims() const { return claims_; }
  // First claim that does not hold.
  const Claim* FirstFailure() const;
  Json ToJson() const;

 private:
  std::vector<Claim> claims_;
};

std::vector<Claim> ClaimsFromJson(const Reader& reader, const Json& node,
                                  const std::string& path);

std::string Sha256Hex(const std::string& data);

// Builds the certificate for an executed command. Throws InternalError if a
// claim of the fresh transcript fails.
Json AssembleCertificate(const std::string& command, const Json& inputs,
                         const Json& verdict, const Json& witness);

struct VerifyReport {
  bool accepted = false;
  std::string reason;
  std::size_t claims = 0;
};

// Checks the digest, rebuilds the transcript from inputs, verdict and
// witness, compares it with the stored one and re-evaluates every claim.
VerifyReport VerifyCertificate(const Json& certificate);

}  // namespace robust_ftap::cli

#endif  // ROBUST_FTAP_CLI_CERTIFICATE_H_
