// Copyright 2026 The polymanip Authors
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

// JSON forms of games, certificates, experiment statistics and configs.

#ifndef POLYMANIP_IO_HPP
#define POLYMANIP_IO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polymanip/agents.hpp"
#include "polymanip/arena.hpp"
#include "polymanip/games.hpp"
#include "polymanip/synth.hpp"

namespace polymanip {

using Json = nlohmann::ordered_json;

// Malformed or inconsistent user input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json matrix_to_json(const MatrixXd& m);
MatrixXd matrix_from_json(const Json& j, const std::string& what);

// {"n","m","l","A12",...,"A32"} plus an optional "labels" array of three
// label lists.
Json game_to_json(const PolymatrixGame& g,
                  const std::optional<std::array<std::vector<std::string>, 3>>& labels = {});
PolymatrixGame game_from_json(const Json& j);

// Builtin name, or a path to a game JSON file.
NamedGame load_game(const std::string& name_or_path);

Json certificate_to_json(const PolicyCertificate& cert);
PolicyCertificate certificate_from_json(const Json& j);

Json report_to_json(const VerificationReport& rep);
Json stats_to_json(const ExperimentStats& st);

struct ExperimentConfig {
  std::string game = "ipd3";
  // "table" (the game's reference policy), "fixture:<name>", "synth",
  // "constant:<action>", "best-constant" or "certificate:<path>".
  std::string policy = "table";
  PolicyClass policy_class = PolicyClass::Type1;
  Objective objective = Objective::MinCost;
  double eps = 0.1;
  AgentSpec agent2{AgentKind::MWU, kFastRate, 0};
  AgentSpec agent3{AgentKind::FTRL, kFastRate, 0};
  Index T = 100;
  std::optional<Index> N;  // default: 200 if either agent is FTRL, else 2000
  std::uint64_t seed = 1;
  UtilityMode mode = UtilityMode::Sampled;
  bool realized_feedback = false;
  int threads = 1;
  std::string out;
  std::string trace_out;

  Index runs() const;
};

Json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace polymanip

#endif  // POLYMANIP_IO_HPP
