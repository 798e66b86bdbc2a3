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

#include "io.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "robust_ftap/errors.h"

namespace robust_ftap::cli {
namespace {

// Last object key mentioned in a path such as "markets[2].S1[0][1]".
std::string LastKey(const std::string& path) {
  std::string key;
  std::string current;
  for (char c : path) {
    if (c == '.' || c == '[') {
      if (!current.empty()) key = current;
      current.clear();
      if (c == '[') current = "#";
    } else if (c == ']') {
      current.clear();
    } else if (current != "#") {
      current += c;
    }
  }
  if (!current.empty() && current != "#") key = current;
  return key;
}

std::size_t LineOf(const std::string& raw, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < raw.size(); ++i) {
    if (raw[i] == '\n') ++line;
  }
  return line;
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

}  // namespace

void Reader::Fail(const std::string& path, const std::string& message) const {
  std::string where = "field '" + (path.empty() ? std::string("<root>") : path) + "'";
  if (raw_ != nullptr) {
    const std::string key = LastKey(path);
    if (!key.empty()) {
      const std::size_t at = raw_->find("\"" + key + "\"");
      if (at != std::string::npos) where += " (line " + std::to_string(LineOf(*raw_, at)) + ")";
    }
  }
  throw InvalidInput(where + ": " + message);
}

const Json& Reader::Field(const Json& object, const std::string& key,
                          const std::string& path) const {
  if (!object.is_object()) Fail(path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) Fail(Join(path, key), "missing");
  return *it;
}

bool Reader::Has(const Json& object, const std::string& key) const {
  return object.is_object() && object.contains(key) && !object.at(key).is_null();
}

const Json& Reader::Array(const Json& node, const std::string& path) const {
  if (!node.is_array()) Fail(path, "expected an array");
  return node;
}

std::string Reader::String(const Json& node, const std::string& path) const {
  if (!node.is_string()) Fail(path, "expected a string");
  return node.get<std::string>();
}

long long Reader::Integer(const Json& node, const std::string& path) const {
  if (!node.is_number_integer()) Fail(path, "expected an integer");
  return node.get<long long>();
}

bool Reader::Bool(const Json& node, const std::string& path) const {
  if (!node.is_boolean()) Fail(path, "expected true or false");
  return node.get<bool>();
}

Rational Reader::Number(const Json& node, const std::string& path) const {
  if (node.is_string()) {
    const std::string text = node.get<std::string>();
    if (canonical_) {
      Rational value;
      if (!ParseCanonicalRational(text, &value)) {
        Fail(path, "'" + text + "' is not a canonical rational");
      }
      return value;
    }
    try {
      return ParseRational(text);
    } catch (const InvalidInput& e) {
      Fail(path, e.what());
    }
  }
  if (!canonical_ && node.is_number_integer()) return Rational(node.get<long>());
  Fail(path, canonical_ ? "expected a rational string"
                        : "expected a rational string or an integer");
}

RationalVector Reader::Vector(const Json& node, const std::string& path,
                              std::optional<std::size_t> size) const {
  Array(node, path);
  if (size && node.size() != *size) {
    Fail(path, "expected " + std::to_string(*size) + " entries, found " +
                   std::to_string(node.size()));
  }
  RationalVector out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(Number(node[i], Index(path, i)));
  return out;
}

RationalMatrix Reader::Matrix(const Json& node, const std::string& path) const {
  Array(node, path);
  RationalMatrix out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(Vector(node[i], Index(path, i)));
  return out;
}

ProbabilityMeasure Reader::Measure(const Json& node, const std::string& path,
                                   std::size_t size) const {
  RationalVector masses = Vector(node, path, size);
  try {
    return ProbabilityMeasure(std::move(masses));
  } catch (const InvalidInput& e) {
    Fail(path, e.what());
  }
}

std::vector<ProbabilityMeasure> Reader::Measures(const Json& node, const std::string& path,
                                                 std::size_t size) const {
  Array(node, path);
  if (node.empty()) Fail(path, "expected at least one measure");
  std::vector<ProbabilityMeasure> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(Measure(node[i], Index(path, i), size));
  return out;
}

OutcomeSet Reader::Event(const Json& node, const std::string& path,
                         const SampleSpace& space) const {
  Array(node, path);
  OutcomeSet out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string label = String(node[i], Index(path, i));
    std::optional<std::size_t> at = space.IndexOf(label);
    if (!at) Fail(Index(path, i), "unknown outcome '" + label + "'");
    if (!out.empty() && *at <= out.back()) Fail(path, "outcomes must follow the space order");
    out.push_back(*at);
  }
  return out;
}

Json ToJson(const Rational& value) { return FormatRational(value); }

Json ToJson(std::span<const Rational> values) {
  Json out = Json::array();
  for (const Rational& v : values) out.push_back(FormatRational(v));
  return out;
}

Json ToJson(const RationalMatrix& values) {
  Json out = Json::array();
  for (const RationalVector& row : values) out.push_back(ToJson(row));
  return out;
}

Json ToJson(const ProbabilityMeasure& measure) { return ToJson(measure.masses()); }

Json EventToJson(const OutcomeSet& event, const SampleSpace& space) {
  Json out = Json::array();
  for (std::size_t w : event) out.push_back(space.label(w));
  return out;
}

Market MarketFromJson(const Reader& reader, const Json& node, const std::string& path) {
  const std::string outcomes_path = Join(path, "outcomes");
  const Json& outcomes = reader.Array(reader.Field(node, "outcomes", path), outcomes_path);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    labels.push_back(reader.String(outcomes[i], Index(outcomes_path, i)));
  }
  std::optional<SampleSpace> space;
  try {
    space.emplace(labels);
  } catch (const InvalidInput& e) {
    reader.Fail(outcomes_path, e.what());
  }
  const long long d = reader.Integer(reader.Field(node, "d", path), Join(path, "d"));
  if (d < 0) reader.Fail(Join(path, "d"), "must be nonnegative");
  const std::size_t assets = static_cast<std::size_t>(d);
  RationalVector s0 = reader.Vector(reader.Field(node, "S0", path), Join(path, "S0"), assets);
  const std::string s1_path = Join(path, "S1");
  const Json& s1_node = reader.Array(reader.Field(node, "S1", path), s1_path);
  if (s1_node.size() != space->size()) {
    reader.Fail(s1_path, "expected one row per outcome (" + std::to_string(space->size()) + ")");
  }
  RationalMatrix s1;
  for (std::size_t i = 0; i < s1_node.size(); ++i) {
    s1.push_back(reader.Vector(s1_node[i], Index(s1_path, i), assets));
  }
  std::vector<ProbabilityMeasure> vertices = reader.Measures(
      reader.Field(node, "ambiguity_vertices", path), Join(path, "ambiguity_vertices"),
      space->size());
  return Market(*space, std::move(s0), std::move(s1), AmbiguitySet(std::move(vertices)));
}

Json MarketToJson(const Market& market) {
  Json vertices = Json::array();
  for (const ProbabilityMeasure& v : market.priors().vertices()) vertices.push_back(ToJson(v));
  return Json{{"outcomes", market.space().labels()},
              {"d", market.asset_count()},
              {"S0", ToJson(market.s0())},
              {"S1", ToJson(market.s1())},
              {"ambiguity_vertices", vertices}};
}

std::vector<SequenceEntry> SequenceFromJson(const Reader& reader, const Json& node,
                                            const std::string& path) {
  const std::string markets_path = Join(path, "markets");
  const Json& markets = reader.Array(reader.Field(node, "markets", path), markets_path);
  std::vector<SequenceEntry> out;
  for (std::size_t i = 0; i < markets.size(); ++i) {
    const std::string at = Index(markets_path, i);
    SequenceEntry entry{MarketFromJson(reader, markets[i], at), std::nullopt, std::nullopt};
    if (reader.Has(markets[i], "max_enum")) {
      const long long cap = reader.Integer(markets[i]["max_enum"], Join(at, "max_enum"));
      if (cap < 0 || cap > kHardEnumerationLimit) {
        reader.Fail(Join(at, "max_enum"),
                    "must be between 0 and " + std::to_string(kHardEnumerationLimit));
      }
      entry.max_enum = static_cast<int>(cap);
    }
    if (reader.Has(markets[i], "prior")) {
      entry.prior = reader.Measure(markets[i]["prior"], Join(at, "prior"),
                                   entry.market.outcome_count());
    }
    out.push_back(std::move(entry));
  }
  return out;
}

Json SequenceToJson(const std::vector<SequenceEntry>& entries) {
  Json markets = Json::array();
  for (const SequenceEntry& e : entries) {
    Json m = MarketToJson(e.market);
    if (e.max_enum) m["max_enum"] = *e.max_enum;
    if (e.prior) m["prior"] = ToJson(*e.prior);
    markets.push_back(std::move(m));
  }
  return Json{{"markets", markets}};
}

PairFile PairFromJson(const Reader& reader, const Json& node, const std::string& path) {
  const std::string outcomes_path = Join(path, "outcomes");
  const Json& outcomes = reader.Array(reader.Field(node, "outcomes", path), outcomes_path);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    labels.push_back(reader.String(outcomes[i], Index(outcomes_path, i)));
  }
  std::optional<SampleSpace> space;
  try {
    space.emplace(labels);
  } catch (const InvalidInput& e) {
    reader.Fail(outcomes_path, e.what());
  }
  AmbiguitySet p(reader.Measures(reader.Field(node, "P_vertices", path),
                                 Join(path, "P_vertices"), space->size()));
  AmbiguitySet q(reader.Measures(reader.Field(node, "Q_vertices", path),
                                 Join(path, "Q_vertices"), space->size()));
  return PairFile{*space, std::move(p), std::move(q)};
}

Json PairToJson(const PairFile& pair) {
  auto list = [](const AmbiguitySet& family) {
    Json out = Json::array();
    for (const ProbabilityMeasure& v : family.vertices()) out.push_back(ToJson(v));
    return out;
  };
  return Json{{"outcomes", pair.space.labels()},
              {"P_vertices", list(pair.p)},
              {"Q_vertices", list(pair.q)}};
}

Json ParseJsonText(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(origin + ": line " + std::to_string(LineOf(text, e.byte)) +
                       ": malformed JSON");
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write '" + temp.string() + "'");
    out << content;
    if (!out.flush()) throw InvalidInput("cannot write '" + temp.string() + "'");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw InvalidInput("cannot replace '" + path + "'");
  }
}

}  // namespace robust_ftap::cli
