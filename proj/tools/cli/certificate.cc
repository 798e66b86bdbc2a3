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

#include "certificate.h"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include "commands.h"
#include "robust_ftap/errors.h"

namespace robust_ftap::cli {
namespace {

constexpr const char* kFormat = "robust_ftap certificate";
constexpr int kVersion = 1;
constexpr const char* kFiniteHorizon = "finite-horizon certificate";

bool KnownRelation(const std::string& r) {
  return r == "==" || r == ">=" || r == "<=" || r == ">" || r == "<";
}

}  // namespace

bool Claim::Holds() const {
  if (relation == "==") return lhs == rhs;
  if (relation == ">=") return lhs >= rhs;
  if (relation == "<=") return lhs <= rhs;
  if (relation == ">") return lhs > rhs;
  if (relation == "<") return lhs < rhs;
  return false;
}

void Transcript::Add(std::string name, Rational lhs, std::string relation, Rational rhs) {
  if (!KnownRelation(relation)) throw InternalError("unknown relation " + relation);
  claims_.push_back({std::move(name), std::move(lhs), std::move(relation), std::move(rhs)});
}

const Claim* Transcript::FirstFailure() const {
  for (const Claim& c : claims_) {
    if (!c.Holds()) return &c;
  }
  return nullptr;
}

Json Transcript::ToJson() const {
  Json out = Json::array();
  for (const Claim& c : claims_) {
    out.push_back({{"claim", c.name},
                   {"lhs", FormatRational(c.lhs)},
                   {"relation", c.relation},
                   {"rhs", FormatRational(c.rhs)}});
  }
  return out;
}

std::vector<Claim> ClaimsFromJson(const Reader& reader, const Json& node,
                                  const std::string& path) {
  reader.Array(node, path);
  std::vector<Claim> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    Claim c{reader.String(reader.Field(node[i], "claim", at), at + ".claim"),
            reader.Number(reader.Field(node[i], "lhs", at), at + ".lhs"),
            reader.String(reader.Field(node[i], "relation", at), at + ".relation"),
            reader.Number(reader.Field(node[i], "rhs", at), at + ".rhs")};
    if (!KnownRelation(c.relation)) reader.Fail(at + ".relation", "unknown relation");
    out.push_back(std::move(c));
  }
  return out;
}

std::string Sha256Hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(),
                 nullptr) != 1) {
    throw InternalError("SHA-256 failed");
  }
  std::string hex;
  char buffer[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buffer, sizeof buffer, "%02x", digest[i]);
    hex += buffer;
  }
  return hex;
}

Json AssembleCertificate(const std::string& command, const Json& inputs,
                         const Json& verdict, const Json& witness) {
  Transcript transcript;
  BuildClaims(command, inputs, verdict, witness, &transcript);
  if (const Claim* bad = transcript.FirstFailure()) {
    throw InternalError("claim '" + bad->name + "' fails: " + FormatRational(bad->lhs) +
                        " " + bad->relation + " " + FormatRational(bad->rhs));
  }
  Json out = {{"format", kFormat},
              {"version", kVersion},
              {"command", command},
              {"inputs", inputs},
              {"inputs_digest", Sha256Hex(inputs.dump())},
              {"verdict", verdict},
              {"witness", witness},
              {"transcript", transcript.ToJson()}};
  if (IsLargeMarketCommand(command)) out["label"] = kFiniteHorizon;
  return out;
}

VerifyReport VerifyCertificate(const Json& certificate) {
  VerifyReport report;
  auto reject = [&report](std::string reason) {
    report.accepted = false;
    report.reason = std::move(reason);
    return report;
  };
  try {
    const Reader reader(nullptr, /*canonical=*/true);
    if (reader.String(reader.Field(certificate, "format", ""), "format") != kFormat) {
      return reject("not a robust_ftap certificate");
    }
    if (reader.Integer(reader.Field(certificate, "version", ""), "version") != kVersion) {
      return reject("unsupported certificate version");
    }
    const std::string command =
        reader.String(reader.Field(certificate, "command", ""), "command");
    if (!IsKnownCommand(command)) return reject("unknown command '" + command + "'");
    const bool labelled = reader.Has(certificate, "label");
    if (IsLargeMarketCommand(command) != labelled ||
        (labelled && reader.String(certificate["label"], "label") != kFiniteHorizon)) {
      return reject("label does not match the command");
    }
    const Json& inputs = reader.Field(certificate, "inputs", "");
    const std::string digest =
        reader.String(reader.Field(certificate, "inputs_digest", ""), "inputs_digest");
    if (digest != Sha256Hex(inputs.dump())) return reject("inputs digest mismatch");
    const Json& verdict = reader.Field(certificate, "verdict", "");
    const Json& witness = reader.Field(certificate, "witness", "");
    const std::vector<Claim> stored =
        ClaimsFromJson(reader, reader.Field(certificate, "transcript", ""), "transcript");
    for (const Claim& c : stored) {
      if (!c.Holds()) return reject("claim '" + c.name + "' does not hold");
    }
    Transcript rebuilt;
    BuildClaims(command, inputs, verdict, witness, &rebuilt);
    if (rebuilt.claims().size() != stored.size()) {
      return reject("transcript has " + std::to_string(stored.size()) +
                    " claims, expected " + std::to_string(rebuilt.claims().size()));
    }
    for (std::size_t i = 0; i < stored.size(); ++i) {
      if (!(stored[i] == rebuilt.claims()[i])) {
        return reject("claim '" + rebuilt.claims()[i].name +
                      "' differs from the recomputed value");
      }
    }
    report.claims = stored.size();
  } catch (const Error& e) {
    return reject(e.what());
  } catch (const Json::exception& e) {
    return reject(std::string("malformed certificate: ") + e.what());
  }
  report.accepted = true;
  return report;
}

}  // namespace robust_ftap::cli
