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

// Full-information online learners for players 2 and 3.

#ifndef POLYMANIP_AGENTS_HPP
#define POLYMANIP_AGENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "polymanip/polymatrix.hpp"

namespace polymanip {

enum class AgentKind { MWU, LMWU, FTRL, FTL, Constant };

const char* to_string(AgentKind k);

struct AgentSpec {
  AgentKind kind = AgentKind::MWU;
  std::optional<double> eta;  // unset: the kind's default
  Index constant_action = 0;  // Constant only
};

// Parses "mwu", "ftrl:0.5", "lmwu:0.15", "ftl", "constant:2" and the named
// presets "mwu:fast", "ftrl:fast", "lmwu:slow".
AgentSpec parse_agent_spec(const std::string& text);
std::string format_agent_spec(const AgentSpec& spec);

// Learning-rate presets used for the reproduction tables.
inline constexpr double kFastRate = 32.0;   // MWU and FTRL
inline constexpr double kSlowRate = 0.15;   // LMWU

// Default learning rate for a kind: sqrt(8 ln m / T) for MWU and FTRL,
// 0.01 for LMWU, 0 otherwise.
double default_learning_rate(AgentKind kind, Index num_actions, Index horizon);

// Affine map from [lo, hi] onto [-1, 1]; a degenerate range maps to 0.
struct PayoffScale {
  double lo = -1, hi = 1;
  double apply(double v) const;
  VectorXd apply(const VectorXd& v) const;
};

class Agent {
 public:
  Agent(const AgentSpec& spec, Index num_actions, Index horizon, PayoffScale scale = {});

  MixedStrategy act() const;
  // Feeds the expected payoff of every action (game units) for this round.
  void update(const VectorXd& counterfactual);

  AgentKind kind() const { return kind_; }
  Index num_actions() const { return num_actions_; }
  Index round() const { return round_; }
  double eta() const { return eta_; }
  // Sum of rescaled payoffs per action.
  const VectorXd& cumulative() const { return cumulative_; }

 private:
  AgentKind kind_;
  Index num_actions_;
  double eta_ = 0;
  Index constant_action_ = 0;
  PayoffScale scale_;
  VectorXd cumulative_;
  VectorXd log_weights_;  // MWU
  VectorXd weights_;      // LMWU, kept normalized
  Index round_ = 0;
};

// Realized and counterfactual payoff sums for one player.
class RegretLedger {
 public:
  explicit RegretLedger(Index num_actions);
  void record(const MixedStrategy& played, const VectorXd& counterfactual);
  Index rounds() const { return rounds_; }
  double realized_total() const { return realized_; }
  const VectorXd& counterfactual_totals() const { return totals_; }

 private:
  VectorXd totals_;
  double realized_ = 0;
  Index rounds_ = 0;
};

// (max_a sum_t v_t[a] - sum_t y_t . v_t) / T
double average_regret(const RegretLedger& ledger, Index horizon);
double average_regret(const RegretLedger& ledger);

}  // namespace polymanip

#endif  // POLYMANIP_AGENTS_HPP
