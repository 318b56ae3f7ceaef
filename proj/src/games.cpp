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

#include "polymanip/games.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace polymanip {

namespace {

MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

MatrixXd distance_matrix() {
  MatrixXd d(12, 12);
  for (int a = 1; a <= 12; ++a)
    for (int b = 1; b <= 12; ++b) d(a - 1, b - 1) = clock_distance(a, b);
  return d;
}

std::vector<std::string> labels(std::initializer_list<const char*> names) {
  return {names.begin(), names.end()};
}

void require_range(double eps, double lo, double hi, bool hi_inclusive, const char* what) {
  if (!std::isfinite(eps) || eps < lo || (hi_inclusive ? eps > hi : eps >= hi)) {
    throw std::invalid_argument(std::string(what) + ": eps=" + std::to_string(eps) +
                                " outside the construction's range");
  }
}

}  // namespace

int clock_distance(int a, int b) {
  const int gap = std::abs(a - b);
  return gap <= 6 ? gap : 12 - gap;
}

PolymatrixGame social_distancing() {
  const MatrixXd d = distance_matrix();
  return PolymatrixGame(d, d, d, d, d, d);
}

PolymatrixGame ipd3() {
  // Lower-indexed player on rows; actions {C, D}.
  const MatrixXd own = mat({{3, 0}, {5, 1}});    // row player's payoff
  const MatrixXd other = mat({{3, 5}, {0, 1}});  // column player's payoff
  return PolymatrixGame(own, own, other, own, other, other);
}

PolymatrixGame electric_petrol() {
  // Actions {P, E}.
  const MatrixXd manip = mat({{0.87, 0}, {0.8, 2}});
  const MatrixXd makers = mat({{2, 1.5}, {1.75, 1.25}});
  return PolymatrixGame(manip, manip, makers, mat({{0, 1}, {0.49, 0}}), makers,
                        mat({{0, 0.49}, {1, 0}}));
}

PolymatrixGame battle_of_buddies() {
  auto diag = [](double a, double b, double c) {
    MatrixXd m = MatrixXd::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
  };
  return PolymatrixGame(diag(3, 2, 1), diag(3, 1, 2), diag(2, 3, 1), diag(1, 3, 2), diag(2, 1, 3),
                        diag(1, 2, 3));
}

std::vector<std::string> builtin_game_names() {
  return {"social-distancing", "ipd3", "electric-petrol", "bob"};
}

NamedGame builtin_game(const std::string& name) {
  if (name == "social-distancing" || name == "sd") {
    std::vector<std::string> pos;
    for (int p = 1; p <= 12; ++p) pos.push_back(std::to_string(p));
    return {"social-distancing", social_distancing(), {pos, pos, pos}};
  }
  if (name == "ipd3") {
    const auto cd = labels({"C", "D"});
    return {"ipd3", ipd3(), {cd, cd, cd}};
  }
  if (name == "electric-petrol" || name == "ep") {
    const auto pe = labels({"P", "E"});
    return {"electric-petrol", electric_petrol(), {pe, pe, pe}};
  }
  if (name == "bob") {
    const auto ev = labels({"1", "2", "3"});
    return {"bob", battle_of_buddies(), {ev, ev, ev}};
  }
  throw std::invalid_argument("unknown game '" + name + "'");
}

PolicyCertificate GameFixture::certificate() const {
  PolicyCertificate cert;
  cert.policy_class = policy_class;
  cert.objective = Objective::Feasibility;
  cert.eps = eps;
  cert.phases.push_back({target, strategy(), 0, 0, 0, 0});
  recompute_phase_values(base, cert);
  return cert;
}

GameFixture social_distancing_win_fixture(double eps) {
  require_range(eps, 0, 2, true, "sd-win");
  GameFixture f{"sd-win", "social-distancing", social_distancing()};
  f.eps = eps;
  f.policy_class = PolicyClass::Type1;
  f.target = {11, 5, 5};  // positions (12, 6, 6)
  MatrixXd hat = distance_matrix();
  for (Index r = 0; r < 12; ++r)
    for (Index c = 0; c < 12; ++c) hat(r, c) += hat(r, c) < 6 ? -eps : eps;
  f.A21 = hat;
  f.A31 = hat;
  f.expected = {12 - 2 * eps, 6 + eps, 6 + eps};
  f.expected_cost = 2 * eps;
  f.degenerate = eps == 0;
  f.in_stated_range = eps > 0;
  return f;
}

GameFixture social_distancing_welfare_fixture(double eps) {
  require_range(eps, 0, 1, false, "sd-welfare");
  GameFixture f{"sd-welfare", "social-distancing", social_distancing()};
  f.eps = eps;
  // Player 3's target beats its alternatives only while player 2 sits on 5.
  f.policy_class = PolicyClass::Type2;
  f.target = {11, 4, 6};  // positions (12, 5, 7)
  const MatrixXd d = distance_matrix();
  f.A21 = d;
  f.A31 = d;
  for (Index c = 0; c < 12; ++c) {
    f.A21(11, c) = d(11, c) + (c == 4 ? 1 - eps : -1 - 2 * eps);
    f.A31(11, c) = d(11, c) + (c == 6 ? 1 - eps : -1 + eps);
  }
  f.expected = {8 - eps, 8 - eps, 8 - eps};
  f.expected_cost = 2 + eps;
  f.degenerate = eps == 0;
  f.in_stated_range = eps > 0;
  f.notes.push_back(
      "player 3's target is dominant only against player 2's target action, so the policy is "
      "certified as type 2");
  return f;
}

GameFixture ipd3_fixture(double eps) {
  require_range(eps, 0, 7.0 / 6.0, true, "ipd3");
  GameFixture f{"ipd3", "ipd3", ipd3()};
  f.eps = eps;
  f.policy_class = PolicyClass::Type1;
  f.target = {1, 0, 0};  // (D, C, C)
  const MatrixXd hat = mat({{3, 5}, {1.5 + eps, -0.5}});
  f.A21 = hat;
  f.A31 = hat;
  f.expected = {7 - 2 * eps, 4.5 + eps, 4.5 + eps};
  f.expected_cost = 3 + 2 * eps;
  f.degenerate = eps == 0;
  return f;
}

GameFixture electric_petrol_fixture(double eps) {
  require_range(eps, 0, 11.0 / 12.0, false, "electric-petrol");
  GameFixture f{"electric-petrol", "electric-petrol", electric_petrol()};
  f.eps = eps;
  f.policy_class = PolicyClass::Type1;
  f.target = {1, 1, 1};  // (E, E, E)
  const MatrixXd hat = mat({{2 - eps, 1.5 + eps}, {1.75 - eps, 1.25 + eps}});
  f.A21 = hat;
  f.A31 = hat;
  f.expected = {4 - 2 * eps, 1.25 + eps, 1.25 + eps};
  f.expected_cost = 2 * eps;
  f.degenerate = eps == 0;
  f.in_stated_range = eps > 3.0 / 12.0;
  f.notes.push_back(
      "E is strictly dominant for players 2 and 3 only when 2*eps > 1.5; below that the "
      "dominance check fails");
  return f;
}

GameFixture bob_fixture(double eps) {
  require_range(eps, 0, 1, false, "bob");
  GameFixture f{"bob", "bob", battle_of_buddies()};
  f.eps = eps;
  f.policy_class = PolicyClass::Type2;
  f.target = {0, 0, 0};
  f.A21 = f.base.A21();
  f.A21.row(0) << 2.5 + eps, -0.5, 0;
  f.A31 = f.base.A31();
  f.expected = {5.5 - eps, 3.5 + eps, 3};
  f.expected_cost = 0.5 + eps;
  f.degenerate = eps == 0;
  return f;
}

GameFixture bob_adversarial_fixture(double eps) {
  require_range(eps, 0, 1, false, "bob-adversarial");
  GameFixture f{"bob-adversarial", "bob", battle_of_buddies()};
  f.eps = eps;
  f.policy_class = PolicyClass::Type2;
  f.target = {0, 0, 0};
  f.A21 = mat({{eps, -3, -3}, {0, 3, 0}, {0, 0, 1}});
  f.A31 = mat({{eps, -2 + eps, -2 + eps}, {0, 1, 0}, {0, 0, 3}});
  f.expected = {1 + eps, 1 + eps, 1 + eps};
  f.expected_cost = 5 - eps;
  f.degenerate = eps == 0;
  f.notes.push_back(
      "player 3's utility is taken from the matrices (1 + eps); a prose value of 3 does not "
      "match them");
  return f;
}

std::vector<std::string> fixture_names() {
  return {"sd-win", "sd-welfare", "ipd3", "electric-petrol", "bob", "bob-adversarial"};
}

GameFixture builtin_fixture(const std::string& name, double eps) {
  if (name == "sd-win") return social_distancing_win_fixture(eps);
  if (name == "sd-welfare") return social_distancing_welfare_fixture(eps);
  if (name == "ipd3") return ipd3_fixture(eps);
  if (name == "electric-petrol" || name == "ep") return electric_petrol_fixture(eps);
  if (name == "bob") return bob_fixture(eps);
  if (name == "bob-adversarial") return bob_adversarial_fixture(eps);
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

std::string table_fixture_for(const std::string& game_name) {
  const std::string canonical = builtin_game(game_name).name;
  if (canonical == "social-distancing") return "sd-win";
  return canonical;
}

}  // namespace polymanip
