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

#include "run.h"

#include <CLI11.hpp>

#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

#include "certificate.h"
#include "commands.h"
#include "io.h"
#include "robust_ftap/large_market.h"
#include "robust_ftap/subsets.h"

namespace robust_ftap::cli {
namespace {

struct Settings {
  std::string input;
  std::string output;
  std::string format = "json";
  std::optional<int> max_enum;
  std::string payoff;
  std::string alpha_grid;
  std::string epsilon_grid;
  std::string c_schedule;
  std::string target_levels;
  std::string epsilon;
  std::string delta;
  int vertex = 1;
  bool dual = false;
  std::string certificate;
};

enum class Source { kMarket, kMarketOrPair, kSequence };

Source SourceOf(const std::string& command) {
  if (command.rfind("hs-", 0) == 0) return Source::kMarketOrPair;
  if (IsLargeMarketCommand(command)) return Source::kSequence;
  return Source::kMarket;
}

int ResolveCap(const Settings& s) {
  long long cap = kDefaultEnumerationCap;
  if (s.max_enum) {
    cap = *s.max_enum;
  } else if (const char* env = std::getenv("ROBUST_FTAP_MAX_ENUM"); env && *env) {
    try {
      std::size_t used = 0;
      cap = std::stoll(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw InvalidInput("ROBUST_FTAP_MAX_ENUM is not an integer");
    }
  }
  if (cap < 0 || cap > kHardEnumerationLimit) {
    throw InvalidInput("enumeration cap must be between 0 and " +
                       std::to_string(kHardEnumerationLimit));
  }
  return static_cast<int>(cap);
}

Rational FlagNumber(const std::string& flag, const std::string& text) {
  try {
    return ParseRational(text);
  } catch (const InvalidInput& e) {
    throw InvalidInput(flag + ": " + e.what());
  }
}

RationalVector FlagList(const std::string& flag, const std::string& csv) {
  RationalVector out;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw InvalidInput(flag + ": empty entry");
    out.push_back(FlagNumber(flag, item.substr(first, last - first + 1)));
  }
  if (out.empty()) throw InvalidInput(flag + ": expected at least one value");
  return out;
}

Json ListJson(const RationalVector& values) { return ToJson(values); }

// Loads the input files leniently and returns the canonical inputs object.
Json BuildInputs(const std::string& command, const Settings& s) {
  if (s.input.empty()) throw InvalidInput("--input is required");
  const std::string raw = ReadFile(s.input);
  const Json root = ParseJsonText(raw, s.input);
  const Reader reader(&raw, /*canonical=*/false);
  Json inputs = Json::object();
  Json options = {{"max_enum", ResolveCap(s)}};
  std::size_t outcomes = 0;
  std::size_t markets = 0;
  switch (SourceOf(command)) {
    case Source::kMarket: {
      Market m = MarketFromJson(reader, root, "");
      outcomes = m.outcome_count();
      inputs["market"] = MarketToJson(m);
      break;
    }
    case Source::kMarketOrPair:
      if (reader.Has(root, "P_vertices")) {
        inputs["pair"] = PairToJson(PairFromJson(reader, root, ""));
      } else {
        inputs["market"] = MarketToJson(MarketFromJson(reader, root, ""));
      }
      break;
    case Source::kSequence: {
      std::vector<SequenceEntry> entries = SequenceFromJson(reader, root, "");
      markets = entries.size();
      inputs["sequence"] = SequenceToJson(entries);
      break;
    }
  }
  auto require = [&](const std::string& value, const std::string& flag) {
    if (value.empty()) throw InvalidInput(command + " needs " + flag);
    return value;
  };
  if (command == "superhedge") {
    const std::string path = require(s.payoff, "--payoff");
    const std::string payoff_raw = ReadFile(path);
    const Json payoff_root = ParseJsonText(payoff_raw, path);
    const Reader payoff_reader(&payoff_raw, false);
    const Json& values = payoff_root.is_object()
                             ? payoff_reader.Field(payoff_root, "payoff", "")
                             : payoff_root;
    inputs["payoff"] = ToJson(payoff_reader.Vector(
        values, payoff_root.is_object() ? "payoff" : "", outcomes));
  }
  if (command == "hs-check" || command == "hs-witness" || command == "hs-dual-witness") {
    options["epsilon"] = ToJson(FlagNumber("--epsilon", require(s.epsilon, "--epsilon")));
    options["delta"] = ToJson(FlagNumber("--delta", require(s.delta, "--delta")));
  }
  if (command == "hs-witness" || command == "hs-dual-witness") options["vertex"] = s.vertex;
  if (command == "hs-modulus") {
    options["epsilon"] = ToJson(FlagNumber("--epsilon", require(s.epsilon, "--epsilon")));
    options["dual"] = s.dual;
  }
  if (command == "weak-contiguity") {
    options["epsilon"] = ToJson(FlagNumber("--epsilon", require(s.epsilon, "--epsilon")));
  }
  if (command == "scan-aa1" || command == "scan-aa2") {
    options["alpha_grid"] = ListJson(s.alpha_grid.empty() ? DefaultAlphaGrid()
                                                           : FlagList("--alpha-grid", s.alpha_grid));
  }
  if (command == "scan-aa1") {
    options["c_schedule"] = ListJson(s.c_schedule.empty() ? DefaultCSchedule(markets)
                                                          : FlagList("--c-schedule", s.c_schedule));
  }
  if (command == "scan-aa2") {
    options["target_levels"] =
        ListJson(s.target_levels.empty()
                     ? DefaultTargetLevels(std::max<std::size_t>(1, markets > 0 ? markets - 1 : 0))
                     : FlagList("--target-levels", s.target_levels));
  }
  if (command == "certify-naa1" || command == "certify-naa2") {
    options["epsilon_grid"] = ListJson(s.epsilon_grid.empty()
                                           ? DefaultAlphaGrid()
                                           : FlagList("--epsilon-grid", s.epsilon_grid));
  }
  inputs["options"] = options;
  return inputs;
}

void Emit(const Settings& s, const std::string& json_text, const std::string& text,
          std::ostream& out) {
  if (s.format == "json") {
    if (s.output.empty()) {
      out << json_text;
    } else {
      WriteFileAtomic(s.output, json_text);
    }
    return;
  }
  out << text;
  if (!s.output.empty()) {
    WriteFileAtomic(s.output, json_text);
    out << "certificate: " << s.output << "\n";
  }
}

int RunCommand(const std::string& command, const Settings& s, std::ostream& out) {
  const Json inputs = BuildInputs(command, s);
  CommandResult result = Execute(command, inputs);
  const Json certificate = AssembleCertificate(command, inputs, result.verdict, result.witness);
  std::string text = "command: " + command + "\n";
  if (certificate.contains("label")) {
    text += "label: " + certificate["label"].get<std::string>() + "\n";
  }
  for (const std::string& line : result.summary) text += line + "\n";
  text += "claims verified: " + std::to_string(certificate["transcript"].size()) + "\n";
  Emit(s, certificate.dump(2) + "\n", text, out);
  return kExitOk;
}

int RunVerify(const Settings& s, std::ostream& out) {
  if (s.certificate.empty()) throw InvalidInput("verify needs --certificate");
  const std::string raw = ReadFile(s.certificate);
  const Json certificate = ParseJsonText(raw, s.certificate);
  const VerifyReport report = VerifyCertificate(certificate);
  const Json json = {{"accepted", report.accepted},
                     {"reason", report.reason},
                     {"claims", report.claims}};
  const std::string text =
      report.accepted
          ? "certificate accepted (" + std::to_string(report.claims) + " claims)\n"
          : "certificate rejected: " + report.reason + "\n";
  Emit(s, json.dump(2) + "\n", text, out);
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEnumerationCapExceeded:
      return kExitCap;
    case ErrorKind::kBoundViolated:
    case ErrorKind::kInternal:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact no-arbitrage and Halmos-Savage certificates for finite markets",
               "robust_ftap"};
  app.require_subcommand(1);
  Settings s;
  auto common = [&s](CLI::App* sub) {
    sub->add_option("--input", s.input, "Market, pair or sequence JSON file");
    sub->add_option("--output", s.output, "Write the certificate here");
    sub->add_option("--format", s.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--max-enum", s.max_enum, "Largest support size to enumerate");
    sub->add_option("--alpha-grid", s.alpha_grid, "Comma-separated alphas (AA scans)");
    sub->add_option("--epsilon-grid", s.epsilon_grid, "Comma-separated epsilons (moduli)");
  };
  static const std::map<std::string, std::string> kDescriptions = {
      {"check-na", "Decide quasi-sure no-arbitrage"},
      {"martingale-polytope", "Enumerate the martingale measures on the quasi-sure support"},
      {"ftap", "Check each prior against a dominating martingale measure"},
      {"superhedge", "Superhedging price and hedge of a payoff"},
      {"hs-check", "Check the primal and dual Halmos-Savage hypotheses"},
      {"hs-witness", "Build a primal Halmos-Savage witness"},
      {"hs-dual-witness", "Build a dual Halmos-Savage witness"},
      {"hs-modulus", "Largest delta satisfying the hypothesis at epsilon"},
      {"scan-aa1", "Search a market sequence for an AA1 witness"},
      {"scan-aa2", "Search a market sequence for an AA2 witness"},
      {"certify-naa1", "Uniform primal moduli over a market sequence"},
      {"certify-naa2", "Uniform dual moduli over a market sequence"},
      {"build-contiguous", "Build a contiguous martingale sequence"},
      {"weak-contiguity", "Weak contiguity bound at epsilon"},
  };
  std::vector<CLI::App*> subs;
  for (const std::string& name : CommandNames()) {
    CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
    common(sub);
    if (name == "superhedge") sub->add_option("--payoff", s.payoff, "Payoff JSON file");
    if (name.rfind("hs-", 0) == 0 || name == "weak-contiguity") {
      sub->add_option("--epsilon", s.epsilon, "Rational epsilon");
    }
    if (name == "hs-check" || name == "hs-witness" || name == "hs-dual-witness") {
      sub->add_option("--delta", s.delta, "Rational delta");
    }
    if (name == "hs-witness" || name == "hs-dual-witness") {
      sub->add_option("--vertex", s.vertex, "1-based P vertex");
    }
    if (name == "hs-modulus") sub->add_flag("--dual", s.dual, "Dual modulus");
    if (name == "scan-aa1") sub->add_option("--c-schedule", s.c_schedule, "Comma-separated c_k");
    if (name == "scan-aa2") {
      sub->add_option("--target-levels", s.target_levels, "Comma-separated levels");
    }
    subs.push_back(sub);
  }
  CLI::App* verify = app.add_subcommand("verify", "Re-check a certificate");
  verify->add_option("--certificate", s.certificate, "Certificate JSON file");
  verify->add_option("--output", s.output, "Write the report here");
  verify->add_option("--format", s.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (verify->parsed()) return RunVerify(s, out);
    for (CLI::App* sub : subs) {
      if (sub->parsed()) return RunCommand(sub->get_name(), s, out);
    }
    err << "error: no command\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace robust_ftap::cli
