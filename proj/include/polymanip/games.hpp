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

// The four built-in games and hand-built manipulation policies for them.
// Actions are 0-based; labels carry the human names (clock positions 1..12,
// C/D, P/E, events 1..3).

#ifndef POLYMANIP_GAMES_HPP
#define POLYMANIP_GAMES_HPP

#include <array>
#include <string>
#include <vector>

#include "polymanip/polymatrix.hpp"
#include "polymanip/synth.hpp"

namespace polymanip {

struct NamedGame {
  std::string name;
  PolymatrixGame game;
  std::array<std::vector<std::string>, 3> labels;
};

// Circular distance between clock positions 1..12.
int clock_distance(int a, int b);

PolymatrixGame social_distancing();
PolymatrixGame ipd3();
PolymatrixGame electric_petrol();
PolymatrixGame battle_of_buddies();

// "social-distancing" (or "sd"), "ipd3", "electric-petrol" (or "ep"), "bob".
NamedGame builtin_game(const std::string& name);
std::vector<std::string> builtin_game_names();

struct GameFixture {
  std::string name;
  std::string game_name;
  PolymatrixGame base;
  double eps = 0;
  PolicyClass policy_class = PolicyClass::Type1;
  Triple target;
  MatrixXd A21, A31;
  // Closed-form single-shot utilities (v1 net of cost) and cost at `target`.
  std::array<double, 3> expected{};
  double expected_cost = 0;
  bool degenerate = false;       // eps == 0: no strict dominance
  bool in_stated_range = true;   // eps inside the range the construction is stated for
  std::vector<std::string> notes;

  CompleteStrategy strategy() const { return {target.i, A21, A31}; }
  PolicyCertificate certificate() const;
};

// Clock position 12 everywhere, players 2 and 3 pushed to 6; type 1.
GameFixture social_distancing_win_fixture(double eps);
// Spreads players to (12, 5, 7) with equal utilities; type 2.
GameFixture social_distancing_welfare_fixture(double eps);
// Player 1 defects, both opponents pushed to cooperate. Requires 0 <= eps <= 7/6.
GameFixture ipd3_fixture(double eps);
// Everyone on E. Requires 0 <= eps < 11/12.
GameFixture electric_petrol_fixture(double eps);
// Everyone at event 1 with the cheapest change. Requires 0 <= eps < 1.
GameFixture bob_fixture(double eps);
// Everyone at event 1, minimizing the opponents' utilities. Requires 0 <= eps < 1.
GameFixture bob_adversarial_fixture(double eps);

// "sd-win", "sd-welfare", "ipd3", "electric-petrol", "bob", "bob-adversarial".
GameFixture builtin_fixture(const std::string& name, double eps);
std::vector<std::string> fixture_names();

// The fixture used as the "policy" row of the reproduction tables for a game.
std::string table_fixture_for(const std::string& game_name);

}  // namespace polymanip

#endif  // POLYMANIP_GAMES_HPP
