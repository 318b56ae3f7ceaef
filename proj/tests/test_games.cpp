#include <doctest.h>

#include <array>

#include "polymanip/dominance.hpp"
#include "polymanip/games.hpp"
#include "polymanip/synth.hpp"

using namespace polymanip;

namespace {

std::array<double, 3> utilities_at(const GameFixture& f) {
  const auto eff = f.base.with_manipulation(f.A21, f.A31);
  const double cost = manipulation_cost(f.A21, f.A31, f.base);
  const ActionProfile p{f.target.i, f.target.j, f.target.k};
  return {realized_utility(eff, p, Player::One, cost), realized_utility(eff, p, Player::Two),
          realized_utility(eff, p, Player::Three)};
}

// The electric-petrol construction never reaches slack eps; it is checked separately.
bool certifies(const std::string& name) { return name != "electric-petrol"; }

}  // namespace

TEST_CASE("clock distance") {
  CHECK(clock_distance(3, 10) == 5);
  int top = 0;
  for (int a = 1; a <= 12; ++a) {
    CHECK(clock_distance(a, a) == 0);
    for (int b = 1; b <= 12; ++b) {
      CHECK(clock_distance(a, b) == clock_distance(b, a));
      top = std::max(top, clock_distance(a, b));
    }
  }
  CHECK(top == 6);
  const auto g = social_distancing();
  for (Index r = 0; r < 12; ++r)
    for (Index c = 0; c < 12; ++c) {
      const double d = clock_distance(static_cast<int>(r) + 1, static_cast<int>(c) + 1);
      for (const auto* m : {&g.A12(), &g.A13(), &g.A21(), &g.A23(), &g.A31(), &g.A32()}) {
        CHECK((*m)(r, c) == d);
      }
    }
}

TEST_CASE("worked single-shot utilities at eps 0.1") {
  struct Row {
    const char* name;
    std::array<double, 3> u;
    double cost;
  };
  const Row rows[] = {
      {"sd-win", {11.8, 6.1, 6.1}, 0.2},       {"sd-welfare", {7.9, 7.9, 7.9}, 2.1},
      {"ipd3", {6.8, 4.6, 4.6}, 3.2},          {"electric-petrol", {3.8, 1.35, 1.35}, 0.2},
      {"bob", {5.4, 3.6, 3.0}, 0.6},           {"bob-adversarial", {1.1, 1.1, 1.1}, 4.9},
  };
  for (const auto& r : rows) {
    CAPTURE(r.name);
    const auto f = builtin_fixture(r.name, 0.1);
    const auto u = utilities_at(f);
    for (int p = 0; p < 3; ++p) {
      CHECK(u[p] == doctest::Approx(r.u[p]).epsilon(1e-12));
      CHECK(f.expected[p] == doctest::Approx(r.u[p]).epsilon(1e-12));
    }
    CHECK(manipulation_cost(f.A21, f.A31, f.base) == doctest::Approx(r.cost).epsilon(1e-12));
    CHECK(f.expected_cost == doctest::Approx(r.cost).epsilon(1e-12));
  }
}

TEST_CASE("electric-petrol fixture at eps 0.5") {
  const auto u = utilities_at(electric_petrol_fixture(0.5));
  CHECK(u[0] == doctest::Approx(3.0));
  CHECK(u[1] == doctest::Approx(1.75));
  CHECK(u[2] == doctest::Approx(1.75));
}

TEST_CASE("base games") {
  const auto ipd = ipd3();
  for (auto p : {Player::One, Player::Two, Player::Three}) CHECK(realized_utility(ipd, {1, 1, 1}, p) == 2.0);

  const auto ep = electric_petrol();
  for (Index i = 0; i < 2; ++i) {
    CHECK(check_type1_dominance(ep, i, 0, Player::Two, 1e-9));
    CHECK(check_type1_dominance(ep, i, 0, Player::Three, 1e-9));
  }
  double ceiling = -1e9;
  for (Index i = 0; i < 2; ++i) ceiling = std::max(ceiling, realized_utility(ep, {i, 0, 0}, Player::One));
  CHECK(ceiling == doctest::Approx(1.74));

  CHECK(builtin_game("sd").name == "social-distancing");
  CHECK(builtin_game("ep").game.n() == 2);
  CHECK(builtin_game("bob").labels[0].size() == 3);
  CHECK_THROWS_AS(builtin_game("chess"), std::invalid_argument);
  CHECK(builtin_game_names().size() == 4);
}

TEST_CASE("fixture eps ranges") {
  CHECK(ipd3_fixture(0.0).degenerate);
  CHECK(social_distancing_win_fixture(0.0).degenerate);
  CHECK_FALSE(ipd3_fixture(0.1).degenerate);
  CHECK_THROWS_AS(ipd3_fixture(1.2), std::invalid_argument);
  CHECK_NOTHROW(ipd3_fixture(7.0 / 6.0));
  CHECK_THROWS_AS(bob_fixture(1.0), std::invalid_argument);
  CHECK_THROWS_AS(electric_petrol_fixture(-0.1), std::invalid_argument);
  CHECK_FALSE(electric_petrol_fixture(0.1).in_stated_range);
  CHECK(electric_petrol_fixture(0.5).in_stated_range);
  CHECK_FALSE(bob_adversarial_fixture(0.1).notes.empty());
}

TEST_CASE("fixtures certify their class at eps 0.1") {
  for (const auto& name : fixture_names()) {
    if (!certifies(name)) continue;
    CAPTURE(name);
    const auto f = builtin_fixture(name, 0.1);
    const auto rep = verify_certificate(f.base, f.certificate(), 1e-9);
    CHECK(rep.passed());
  }
}

TEST_CASE("the electric-petrol construction falls short of eps dominance") {
  // Playing E gains 2 eps - 1.5 over P against an opponent on E.
  for (double eps : {0.1, 0.5, 0.8, 0.9}) {
    CAPTURE(eps);
    const auto f = electric_petrol_fixture(eps);
    const auto eff = f.base.with_manipulation(f.A21, f.A31);
    const double slack = type1_dominance_slack(eff, 1, 1, Player::Two);
    CHECK(slack == doctest::Approx(2 * eps - 1.5));
    CHECK(slack < eps);
    CHECK(check_type1_dominance(eff, 1, 1, Player::Two, 0.0) == (eps > 0.75));
    CHECK_FALSE(verify_certificate(f.base, f.certificate(), 1e-9).passed());
  }
}

TEST_CASE("min-cost synthesis never costs more than a fixture") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    if (!certifies(name)) continue;
    const double eps = 0.1;
    const auto f = builtin_fixture(name, eps);
    SynthesisRequest req{f.base};
    req.policy_class = f.policy_class;
    req.objective = Objective::MinCost;
    req.eps = eps;
    const auto res = synthesize(req);
    REQUIRE(res.certificate);
    CHECK(res.certificate->cost() <= f.expected_cost + 1e-9);
  }
}

TEST_CASE("table fixtures") {
  CHECK(table_fixture_for("sd") == "sd-win");
  CHECK(table_fixture_for("ipd3") == "ipd3");
  CHECK(table_fixture_for("ep") == "electric-petrol");
  CHECK(table_fixture_for("bob") == "bob");
}
