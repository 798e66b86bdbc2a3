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

#ifndef ROBUST_FTAP_CLI_IO_H_
#define ROBUST_FTAP_CLI_IO_H_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "robust_ftap/market.h"
#include "robust_ftap/measures.h"
#include "robust_ftap/rational.h"

namespace robust_ftap::cli {

using Json = nlohmann::json;

// Reads JSON fields with error messages that name the field path and, when
// the raw text is known, the line of the field's key.
class Reader {
 public:
  // `canonical` demands the exact output of FormatRational for every number.
  Reader(const std::string* raw, bool canonical) : raw_(raw), canonical_(canonical) {}

  [[noreturn]] void Fail(const std::string& path, const std::string& message) const;

  const Json& Field(const Json& object, const std::string& key,
                    const std::string& path) const;
  bool Has(const Json& object, const std::string& key) const;
  const Json& Array(const Json& node, const std::string& path) const;
  std::string String(const Json& node, const std::string& path) const;
  long long Integer(const Json& node, const std::string& path) const;
  bool Bool(const Json& node, const std::string& path) const;
  Rational Number(const Json& node, const std::string& path) const;
  RationalVector Vector(const Json& node, const std::string& path,
                        std::optional<std::size_t> size = std::nullopt) const;
  RationalMatrix Matrix(const Json& node, const std::string& path) const;
  ProbabilityMeasure Measure(const Json& node, const std::string& path,
                             std::size_t size) const;
  std::vector<ProbabilityMeasure> Measures(const Json& node, const std::string& path,
                                           std::size_t size) const;
  OutcomeSet Event(const Json& node, const std::string& path,
                   const SampleSpace& space) const;

 private:
  const std::string* raw_;
  bool canonical_;
};

Json ToJson(const Rational& value);
Json ToJson(std::span<const Rational> values);
Json ToJson(const RationalMatrix& values);
Json ToJson(const ProbabilityMeasure& measure);
Json EventToJson(const OutcomeSet& event, const SampleSpace& space);

// {outcomes, d, S0, S1, ambiguity_vertices}.
Market MarketFromJson(const Reader& reader, const Json& node, const std::string& path);
Json MarketToJson(const Market& market);

// One entry of a sequence file.
struct SequenceEntry {
  Market market;
  std::optional<int> max_enum;
  std::optional<ProbabilityMeasure> prior;
};

// {"markets": [...]}; each market may carry "max_enum" and "prior".
std::vector<SequenceEntry> SequenceFromJson(const Reader& reader, const Json& node,
                                            const std::string& path);
Json SequenceToJson(const std::vector<SequenceEntry>& entries);

// {outcomes, P_vertices, Q_vertices}.
struct PairFile {
  SampleSpace space;
  AmbiguitySet p;
  AmbiguitySet q;
};

PairFile PairFromJson(const Reader& reader, const Json& node, const std::string& path);
Json PairToJson(const PairFile& pair);

// Parses JSON text; syntax errors become InvalidInput naming `origin` and
// the line.
Json ParseJsonText(const std::string& text, const std::string& origin);

std::string ReadFile(const std::string& path);

// Writes to a sibling temporary file and renames it over `path`.
void WriteFileAtomic(const std::string& path, const std::string& content);

}  // namespace robust_ftap::cli

#endif  // ROBUST_FTAP_CLI_IO_H_
