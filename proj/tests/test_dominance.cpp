#include <doctest.h>

#include <random>

#include "polymanip/dominance.hpp"
#include "polymanip/games.hpp"
#include "support/random_cases.hpp"

using namespace polymanip;

namespace {

// Player 3's utility of action k when players 1 and 2 play (i, j).
double u3(const PolymatrixGame& g, Index i, Index j, Index k) { return g.A31()(i, k) + g.A32()(j, k); }
double u2(const PolymatrixGame& g, Index i, Index j, Index k) { return g.A21()(i, j) + g.A23()(j, k); }

bool brute_type2(const PolymatrixGame& g, Index i, Index j, Index k_star, double slack) {
  for (Index k = 0; k < g.l(); ++k) {
    if (k != k_star && u3(g, i, j, k_star) - u3(g, i, j, k) < slack) return false;
  }
  return true;
}

bool brute_type1_p2(const PolymatrixGame& g, Index i, Index j_star, double slack) {
  for (Index k = 0; k < g.l(); ++k)
    for (Index j = 0; j < g.m(); ++j) {
      if (j != j_star && u2(g, i, j_star, k) - u2(g, i, j, k) < slack) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("defection dominates in the prisoner's dilemma") {
  const auto g = ipd3();
  for (Index i = 0; i < 2; ++i) {
    CHECK(check_type1_dominance(g, i, 1, Player::Two, 1.0));
    CHECK(check_type1_dominance(g, i, 1, Player::Three, 1.0));
    CHECK_FALSE(check_type1_dominance(g, i, 0, Player::Two, 0.0));
  }
}

TEST_CASE("the clock fixture makes position 6 dominant") {
  const auto f = social_distancing_win_fixture(0.1);
  const auto eff = f.base.with_manipulation(f.A21, f.A31);
  CHECK(check_type1_dominance(eff, 11, 5, Player::Two, 0.1));
  CHECK(check_type1_dominance(eff, 11, 5, Player::Three, 0.1));
  CHECK(type1_dominance_slack(eff, 11, 5, Player::Two) >= 0.1 - 1e-12);
  CHECK_FALSE(check_type1_dominance(f.base, 11, 5, Player::Two, 0.1));
}

TEST_CASE("ties are never strict") {
  const MatrixXd one = MatrixXd::Ones(2, 2);
  const PolymatrixGame g(one, one, one, one, one, one);
  CHECK_FALSE(check_type1_dominance(g, 0, 0, Player::Two, 1e-12));
  CHECK_FALSE(check_type2_dominance(g, 0, 0, 0, 1e-12));
  CHECK(check_type1_dominance(g, 0, 0, Player::Two, 0.0));
  CHECK(type1_dominance_slack(g, 0, 0, Player::Three) == 0.0);
}

TEST_CASE("single-action opponents have nothing to beat") {
  const MatrixXd a = MatrixXd::Zero(2, 1);
  const PolymatrixGame g(a, a, a, MatrixXd::Zero(1, 1), a, MatrixXd::Zero(1, 1));
  CHECK(std::isinf(type1_dominance_slack(g, 0, 0, Player::Two)));
  CHECK(check_type2_dominance(g, 1, 0, 0, 100.0));
}

TEST_CASE("the buddies fixture is dominant for player 3 only against the target") {
  const auto f = bob_fixture(0.1);
  const auto eff = f.base.with_manipulation(f.A21, f.A31);
  CHECK(check_type1_dominance(eff, 0, 0, Player::Two, 0.1));
  CHECK(check_type2_dominance(eff, 0, 0, 0, 0.1));
  CHECK_FALSE(check_type1_dominance(eff, 0, 0, Player::Three, 0.1));
}

TEST_CASE("dominance predicates agree with direct enumeration") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const auto g = cases::random_game(rng, 2, 2, 2, -2, 2);
    const double slack = cases::half_step(rng, 0, 1);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j)
        for (Index k = 0; k < 2; ++k) {
          CHECK(check_type2_dominance(g, i, j, k, slack) == brute_type2(g, i, j, k, slack));
        }
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j) {
        CHECK(check_type1_dominance(g, i, j, Player::Two, slack) == brute_type1_p2(g, i, j, slack));
      }
  }
}

TEST_CASE("type-1 dominance implies type-2 dominance against every action") {
  std::mt19937_64 rng(23);
  int implied = 0;
  for (int t = 0; t < 300; ++t) {
    const auto g = cases::random_game(rng, 2, 3, 3, -2, 2);
    for (Index i = 0; i < 2; ++i)
      for (Index k = 0; k < 3; ++k) {
        if (!check_type1_dominance(g, i, k, Player::Three, 0.5)) continue;
        ++implied;
        for (Index j = 0; j < 3; ++j) CHECK(check_type2_dominance(g, i, j, k, 0.5));
      }
  }
  CHECK(implied > 0);
}
