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

// Repeated play of a manipulator policy against two learning agents.

#ifndef POLYMANIP_ARENA_HPP
#define POLYMANIP_ARENA_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "polymanip/agents.hpp"
#include "polymanip/polymatrix.hpp"
#include "polymanip/synth.hpp"

namespace polymanip {

enum class UtilityMode { Sampled, Expected };

const char* to_string(UtilityMode m);
UtilityMode parse_utility_mode(const std::string& s);

struct ArenaOptions {
  UtilityMode mode = UtilityMode::Sampled;
  // Feed agents payoffs against the opponents' sampled actions instead of
  // their mixed strategies (sampled mode only).
  bool realized_feedback = false;
  bool record_rounds = true;
};

struct RoundRecord {
  Index round = 0;  // 1-based
  Index a1 = 0;
  Index a2 = -1, a3 = -1;  // -1 in expected mode
  MixedStrategy y = MixedStrategy::uniform(1);
  MixedStrategy z = MixedStrategy::uniform(1);
  double u1 = 0, u2 = 0, u3 = 0;  // utilities scored this round (mode dependent)
  double e1 = 0, e2 = 0, e3 = 0;  // expected utilities
  double cost = 0;
};

struct GameTrace {
  std::uint64_t seed = 0;
  Index horizon = 0;
  std::vector<RoundRecord> rounds;  // empty unless recorded
  double U1 = 0, U2 = 0, U3 = 0;    // time averages
  RegretLedger regret2{1}, regret3{1};
};

// min(U1 - U2, U1 - U3) when U1 strictly exceeds both, otherwise empty.
std::optional<double> margin(double u1, double u2, double u3);
std::optional<double> margin(const GameTrace& trace);

// Per-run generator: splitmix64 of the seed feeds a 64-bit Mersenne twister.
std::mt19937_64 make_rng(std::uint64_t seed);
// Inverse-CDF draw using 53 random bits, identical on every platform.
Index sample_action(const MixedStrategy& s, std::mt19937_64& rng);

// Per-player payoff ranges over every profile of the games the policy puts
// in effect; used to rescale agent feedback into [-1, 1].
std::array<PayoffScale, 2> policy_payoff_scales(const PolymatrixGame& g,
                                                const ManipulatorPolicy& policy);

GameTrace run_game(const PolymatrixGame& g, const ManipulatorPolicy& policy,
                   const AgentSpec& agent2, const AgentSpec& agent3, Index horizon,
                   std::uint64_t seed, const ArenaOptions& opt = {});

struct ExperimentSpec {
  PolymatrixGame game;
  ManipulatorPolicy policy;
  AgentSpec agent2, agent3;
  Index horizon = 100;
  ArenaOptions arena;
};

struct ExperimentStats {
  Index runs = 0;
  Index wins = 0;
  double win_rate = 0;
  std::optional<double> mean_margin;  // over winning runs
  std::vector<std::uint64_t> seeds;
  std::vector<double> margins;  // per run; NaN for runs that were not won
  std::vector<std::array<double, 3>> utilities;  // per run (U1, U2, U3)
};

ExperimentStats run_experiment(const ExperimentSpec& spec, Index runs, std::uint64_t base_seed,
                               int threads = 1);

struct BaselineResult {
  Index action = 0;
  ExperimentStats stats;
  std::vector<ExperimentStats> per_action;
};

// Tries every pure manipulator action with unmodified matrices and keeps the
// best by win rate, then mean margin, then lowest index.
BaselineResult best_constant_baseline(const PolymatrixGame& g, const AgentSpec& agent2,
                                      const AgentSpec& agent3, Index horizon, Index runs,
                                      std::uint64_t base_seed, const ArenaOptions& opt = {},
                                      int threads = 1);

// CSV with columns round,u1,u2,u3,cost,a1,a2,a3.
void write_trace_csv(std::ostream& os, const GameTrace& trace);

}  // namespace polymanip

#endif  // POLYMANIP_ARENA_HPP
