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

// Policy resolution for experiment configs and the win-rate tables.

#ifndef POLYMANIP_EXPERIMENTS_HPP
#define POLYMANIP_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polymanip/io.hpp"

namespace polymanip {

// No policy of the requested class wins the game.
class NoPolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A supplied certificate does not hold for the game.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResolvedPolicy {
  ManipulatorPolicy policy;
  std::string description;
  std::optional<PolicyCertificate> certificate;
};

// Reference policy used in the tables: the game's closed-form fixture when it
// verifies at `eps`, otherwise the min-cost policy of the fixture's class.
ResolvedPolicy table_policy(const std::string& game_name, double eps);

// Resolves every policy source except "best-constant", which is not a single
// policy. Throws InputError, NoPolicyError or VerificationError.
ResolvedPolicy resolve_policy(const ExperimentConfig& cfg, const NamedGame& game);

struct SimulationOutput {
  ExperimentStats stats;
  std::string policy_description;
  std::optional<Index> constant_action;  // set for "best-constant"
  std::optional<ManipulatorPolicy> policy;  // the policy that was played
};

SimulationOutput simulate(const ExperimentConfig& cfg);
Json simulation_to_json(const ExperimentConfig& cfg, const SimulationOutput& out);

// --- tables ---------------------------------------------------------------

struct TableRow {
  AgentSpec agent2, agent3;
  std::optional<Index> constant_action;
  ExperimentStats stats;
};

struct ReproTable {
  std::string id;
  std::string game;
  bool best_constant = false;
  std::string policy_description;
  double eps = 0.1;
  Index horizon = 100;
  std::uint64_t seed = 1;
  std::vector<TableRow> rows;
};

struct TableOptions {
  double eps = 0.1;
  Index horizon = 100;
  std::optional<Index> runs;  // default per row: 200 with an FTRL agent, else 2000
  std::uint64_t seed = 1;
  UtilityMode mode = UtilityMode::Sampled;
  int threads = 1;
};

// "<game>-constant" and "<game>-policy" for the four builtin games.
std::vector<std::string> table_ids();
// Agent pairings of every table: MWU/FTRL, MWU/LMWU, LMWU/LMWU.
std::vector<std::pair<AgentSpec, AgentSpec>> table_agent_pairs();

ReproTable reproduce_table(const std::string& id, const TableOptions& opt = {});

Json table_to_json(const ReproTable& t);
std::string table_to_markdown(const ReproTable& t);
std::string table_to_csv(const std::vector<ReproTable>& tables);

}  // namespace polymanip

#endif  // POLYMANIP_EXPERIMENTS_HPP
