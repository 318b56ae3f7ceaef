#include <doctest.h>

#include <random>

#include "polymanip/games.hpp"
#include "polymanip/polymatrix.hpp"
#include "support/random_cases.hpp"

using namespace polymanip;

namespace {

constexpr Index C = 0, D = 1;  // prisoner's dilemma
constexpr Index P = 0, E = 1;  // electric vs petrol

// Sum over all pure profiles weighted by their probabilities.
double enumerate_expected(const PolymatrixGame& g, const MixedStrategy& x, const MixedStrategy& y,
                          const MixedStrategy& z, Player p) {
  double total = 0;
  for (Index i = 0; i < g.n(); ++i)
    for (Index j = 0; j < g.m(); ++j)
      for (Index k = 0; k < g.l(); ++k) total += x(i) * y(j) * z(k) * realized_utility(g, {i, j, k}, p);
  return total;
}

MixedStrategy random_mixed(std::mt19937_64& rng, Index size) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VectorXd v(size);
  for (Index a = 0; a < size; ++a) v(a) = u(rng);
  return MixedStrategy(v / v.sum());
}

}  // namespace

TEST_CASE("shapes are validated and the bad matrix is named") {
  const MatrixXd a = MatrixXd::Zero(2, 3), b = MatrixXd::Zero(2, 2), s = MatrixXd::Zero(3, 2);
  CHECK_NOTHROW(PolymatrixGame(a, b, a, s, b, s));
  try {
    PolymatrixGame(a, b, b, s, b, s);
    FAIL("expected a DimensionError");
  } catch (const DimensionError& e) {
    CHECK(e.matrix() == "A21");
  }
  MatrixXd bad = a;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(PolymatrixGame(bad, b, a, s, b, s), std::invalid_argument);
}

TEST_CASE("mixed strategies must lie on the simplex") {
  CHECK_THROWS_AS(MixedStrategy(VectorXd::Constant(2, 0.6)), std::invalid_argument);
  CHECK_THROWS_AS(MixedStrategy((VectorXd(2) << 1.5, -0.5).finished()), std::invalid_argument);
  CHECK_THROWS_AS(MixedStrategy::pure(3, 3), std::out_of_range);
  CHECK(MixedStrategy::uniform(4)(2) == 0.25);
  CHECK(MixedStrategy::pure(3, 1).probs() == VectorXd::Unit(3, 1));
}

TEST_CASE("manipulation cost") {
  const auto sd = social_distancing();
  CHECK(manipulation_cost(sd.A21(), sd.A31(), sd) == 0.0);

  const auto win = social_distancing_win_fixture(0.1);
  CHECK(manipulation_cost(win.A21, win.A31, sd) == doctest::Approx(0.2));

  const auto bob = bob_fixture(0.1);
  CHECK(bob.A31 == bob.base.A31());
  CHECK(manipulation_cost(bob.A21, bob.A31, bob.base) == doctest::Approx(0.6));

  try {
    manipulation_cost(MatrixXd(MatrixXd::Zero(1, 1)), sd.A31(), sd);
    FAIL("expected a DimensionError");
  } catch (const DimensionError& e) {
    CHECK(e.matrix() == "A21");
  }
}

TEST_CASE("manipulation cost is a sum of two metrics") {
  std::mt19937_64 rng(11);
  const auto g = cases::random_game(rng, 3, 2, 2);
  for (int t = 0; t < 50; ++t) {
    const MatrixXd a21 = cases::random_matrix(rng, 3, 2, -3, 3), b21 = cases::random_matrix(rng, 3, 2, -3, 3);
    const MatrixXd a31 = cases::random_matrix(rng, 3, 2, -3, 3), b31 = cases::random_matrix(rng, 3, 2, -3, 3);
    const auto ga = g.with_manipulation(a21, a31);
    const double direct = manipulation_cost(b21, b31, g);
    const double via = manipulation_cost(a21, a31, g) + manipulation_cost(b21, b31, ga);
    CHECK(direct >= 0);
    CHECK(direct <= via + 1e-12);
    CHECK((manipulation_cost(a21, a31, g) == 0) == (a21 == g.A21() && a31 == g.A31()));
  }
}

TEST_CASE("expected utility at worked profiles") {
  const auto ipd = ipd3_fixture(0.1);
  const auto eff = ipd.base.with_manipulation(ipd.A21, ipd.A31);
  const double cost = manipulation_cost(ipd.A21, ipd.A31, ipd.base);
  const auto x = MixedStrategy::pure(2, D), y = MixedStrategy::pure(2, C), z = MixedStrategy::pure(2, C);
  // Revenue 5 + 5 = 10 at (D, C, C); the manipulation costs 3 + 2 eps.
  CHECK(cost == doctest::Approx(3.2));
  CHECK(expected_utility(eff, x, y, z, Player::One, cost) == doctest::Approx(6.8));
  CHECK_THROWS_AS(expected_utility(eff, x, y, z, Player::Two, 0.5), std::invalid_argument);

  const auto ep = electric_petrol_fixture(0.1);
  const auto ep_eff = ep.base.with_manipulation(ep.A21, ep.A31);
  const auto e = MixedStrategy::pure(2, E);
  CHECK(expected_utility(ep_eff, e, e, e, Player::Two) == doctest::Approx(1.35));
}

TEST_CASE("expected utility matches enumeration over profiles") {
  const auto g = ipd3();
  const auto u = MixedStrategy::uniform(2);
  for (auto p : {Player::One, Player::Two, Player::Three}) {
    CHECK(expected_utility(g, u, u, u, p) == doctest::Approx(enumerate_expected(g, u, u, u, p)));
  }
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto h = cases::random_game(rng, 3, 2, 4);
    const auto x = random_mixed(rng, 3), y = random_mixed(rng, 2), z = random_mixed(rng, 4);
    for (auto p : {Player::One, Player::Two, Player::Three}) {
      CHECK(expected_utility(h, x, y, z, p) == doctest::Approx(enumerate_expected(h, x, y, z, p)));
    }
  }
}

TEST_CASE("expected utility is linear in each strategy") {
  std::mt19937_64 rng(5);
  const auto g = cases::random_game(rng, 3, 3, 3);
  const auto x = random_mixed(rng, 3), y = random_mixed(rng, 3), z = random_mixed(rng, 3);
  const VectorXd dir = (VectorXd(3) << 1, -1, 0).finished();
  const double base = expected_utility(g, x, y, z, Player::Two);
  const double step = 0.01;
  const VectorXd y1 = y.probs() + step * dir, y2 = y.probs() + 2 * step * dir;
  if ((y2.array() >= 0).all()) {
    const double d1 = expected_utility(g, x, MixedStrategy(y1), z, Player::Two) - base;
    const double d2 = expected_utility(g, x, MixedStrategy(y2), z, Player::Two) - base;
    CHECK(d2 == doctest::Approx(2 * d1));
  }
}

TEST_CASE("realized utility at worked profiles") {
  const auto sd = social_distancing();
  // Clock positions 3, 10, 6.
  CHECK(realized_utility(sd, {2, 9, 5}, Player::One) == 8.0);
  CHECK(realized_utility(sd, {2, 9, 5}, Player::Two) == 9.0);
  CHECK(realized_utility(sd, {2, 9, 5}, Player::Three) == 7.0);
  for (auto p : {Player::One, Player::Two, Player::Three}) CHECK(realized_utility(sd, {4, 4, 4}, p) == 0.0);

  const auto bob = bob_fixture(0.1);
  const auto eff = bob.base.with_manipulation(bob.A21, bob.A31);
  const double cost = manipulation_cost(bob.A21, bob.A31, bob.base);
  CHECK(realized_utility(eff, {0, 0, 0}, Player::One, cost) == doctest::Approx(5.4));
  CHECK(realized_utility(eff, {0, 0, 0}, Player::Two) == doctest::Approx(3.6));
  CHECK(realized_utility(eff, {0, 0, 0}, Player::Three) == doctest::Approx(3.0));
  CHECK_THROWS_AS(realized_utility(eff, {3, 0, 0}, Player::One), std::out_of_range);
}

TEST_CASE("pure strategies give exactly the realized utility") {
  std::mt19937_64 rng(8);
  const auto g = cases::random_game(rng, 2, 3, 2);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j)
      for (Index k = 0; k < 2; ++k)
        for (auto p : {Player::One, Player::Two, Player::Three}) {
          CHECK(expected_utility(g, MixedStrategy::pure(2, i), MixedStrategy::pure(3, j),
                                 MixedStrategy::pure(2, k), p) == realized_utility(g, {i, j, k}, p));
        }
}

TEST_CASE("counterfactual payoffs") {
  const auto ipd = ipd3();
  const auto d = MixedStrategy::pure(2, D);
  const VectorXd v = counterfactual_payoffs(ipd, Player::Two, d, d);
  CHECK(v(C) == 0.0);
  CHECK(v(D) == 2.0);
  CHECK_THROWS_AS(counterfactual_payoffs(ipd, Player::One, d, d), std::invalid_argument);

  const auto ep = electric_petrol();
  const auto p = MixedStrategy::pure(2, P);
  const VectorXd w = counterfactual_payoffs(ep, Player::Two, p, p);
  CHECK(w(P) == doctest::Approx(2.0));
  CHECK(w(E) == doctest::Approx(1.99));

  const MatrixXd z22 = MatrixXd::Zero(2, 2);
  const PolymatrixGame quiet(ep.A12(), ep.A13(), z22, z22, ep.A31(), ep.A32());
  CHECK(counterfactual_payoffs(quiet, Player::Two, p, p).isZero(0));

  // Each entry is the expected utility of the corresponding pure action.
  std::mt19937_64 rng(13);
  const auto g = cases::random_game(rng, 2, 3, 4);
  const auto x = random_mixed(rng, 2), y = random_mixed(rng, 3), z = random_mixed(rng, 4);
  const VectorXd v2 = counterfactual_payoffs(g, Player::Two, x, z);
  const VectorXd v3 = counterfactual_payoffs(g, Player::Three, x, y);
  for (Index j = 0; j < 3; ++j) {
    CHECK(v2(j) == doctest::Approx(expected_utility(g, x, MixedStrategy::pure(3, j), z, Player::Two)));
  }
  for (Index k = 0; k < 4; ++k) {
    CHECK(v3(k) == doctest::Approx(expected_utility(g, x, y, MixedStrategy::pure(4, k), Player::Three)));
  }
}
