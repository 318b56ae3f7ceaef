#include <doctest.h>

#include <cmath>
#include <sstream>

#include "polymanip/arena.hpp"
#include "polymanip/games.hpp"

using namespace polymanip;

namespace {

constexpr Index C = 0, D = 1;

AgentSpec constant_agent(Index a) {
  AgentSpec s;
  s.kind = AgentKind::Constant;
  s.constant_action = a;
  return s;
}

AgentSpec mwu_fast() { return parse_agent_spec("mwu:fast"); }

ManipulatorPolicy plain(const PolymatrixGame& g, Index action) {
  return ManipulatorPolicy::constant({action, g.A21(), g.A31()});
}

ManipulatorPolicy fixture_policy(const GameFixture& f) {
  return ManipulatorPolicy::constant({f.target.i, f.A21, f.A31});
}

ArenaOptions expected_mode() {
  ArenaOptions o;
  o.mode = UtilityMode::Expected;
  return o;
}

}  // namespace

TEST_CASE("margin") {
  CHECK(*margin(5, 3, 1) == 2.0);
  CHECK_FALSE(margin(5, 5, 1));
  CHECK_FALSE(margin(1, 2, 3));
  CHECK(*margin(0.5, -1, 0.25) == 0.25);
}

TEST_CASE("mutual defection scores two each") {
  const auto g = ipd3();
  for (auto mode : {UtilityMode::Expected, UtilityMode::Sampled}) {
    ArenaOptions o;
    o.mode = mode;
    const auto tr = run_game(g, plain(g, D), constant_agent(D), constant_agent(D), 50, 1, o);
    CHECK(tr.U1 == doctest::Approx(2.0));
    CHECK(tr.U2 == doctest::Approx(2.0));
    CHECK(tr.U3 == doctest::Approx(2.0));
    CHECK_FALSE(margin(tr));
    CHECK(tr.rounds.size() == 50);
  }
}

TEST_CASE("a fixture policy against agents already at the target") {
  const auto f = social_distancing_win_fixture(0.1);
  const auto tr = run_game(f.base, fixture_policy(f), constant_agent(5), constant_agent(5), 20, 3,
                           expected_mode());
  CHECK(tr.U1 == doctest::Approx(11.8));
  CHECK(tr.U2 == doctest::Approx(6.1));
  CHECK(tr.U3 == doctest::Approx(6.1));
  CHECK(*margin(tr) == doctest::Approx(5.7));
  CHECK(tr.rounds[0].cost == doctest::Approx(0.2));
  CHECK(tr.rounds[0].a1 == 11);
  CHECK(tr.rounds[0].a2 == -1);
}

TEST_CASE("learners find the dominant action the fixture installs") {
  const auto f = ipd3_fixture(0.1);
  const auto tr = run_game(f.base, fixture_policy(f), mwu_fast(), mwu_fast(), 300, 7);
  // The target profile is (D, C, C).
  CHECK(tr.rounds.back().y(C) > 0.99);
  CHECK(tr.rounds.back().z(C) > 0.99);
  CHECK(margin(tr).has_value());
  CHECK(average_regret(tr.regret2) < 0.5);
  CHECK(tr.regret2.rounds() == 300);
}

TEST_CASE("batch policies switch after the first half") {
  const auto g = ipd3();
  const auto pol = ManipulatorPolicy::batch({C, g.A21(), g.A31()}, {D, g.A21(), g.A31()});
  const auto tr = run_game(g, pol, constant_agent(C), constant_agent(C), 5, 1, expected_mode());
  std::vector<Index> played;
  for (const auto& r : tr.rounds) played.push_back(r.a1);
  CHECK(played == std::vector<Index>{C, C, C, D, D});
  CHECK(pol.at_round(3, 5).action == C);
  CHECK(pol.at_round(4, 5).action == D);
  CHECK(pol.at_round(2, 4).action == C);
  CHECK(pol.at_round(3, 4).action == D);
  // Three rounds at 3 + 3, two at 5 + 5, over five rounds.
  CHECK(tr.U1 == doctest::Approx((3 * 6.0 + 2 * 10.0) / 5));
}

TEST_CASE("runs are reproducible and independent of the thread count") {
  const auto f = ipd3_fixture(0.1);
  ExperimentSpec spec{f.base, fixture_policy(f), mwu_fast(), parse_agent_spec("ftrl:fast"), 60, {}};
  const auto one = run_experiment(spec, 12, 42, 1);
  const auto three = run_experiment(spec, 12, 42, 3);
  CHECK(one.seeds == three.seeds);
  CHECK(one.utilities == three.utilities);
  CHECK(one.wins == three.wins);
  for (std::size_t r = 0; r < one.margins.size(); ++r) {
    CHECK(std::isnan(one.margins[r]) == std::isnan(three.margins[r]));
    if (!std::isnan(one.margins[r])) CHECK(one.margins[r] == three.margins[r]);
  }
  CHECK(one.seeds.front() == 42);
  CHECK(one.seeds.back() == 53);

  // A slow learner keeps mixing, so the sampled actions depend on the seed.
  const auto slow = parse_agent_spec("mwu");
  const auto a = run_game(f.base, fixture_policy(f), slow, slow, 40, 9);
  const auto b = run_game(f.base, fixture_policy(f), slow, slow, 40, 9);
  const auto c = run_game(f.base, fixture_policy(f), slow, slow, 40, 10);
  CHECK(a.U1 == b.U1);
  CHECK(a.U2 == b.U2);
  bool differs = false;
  for (std::size_t r = 0; r < a.rounds.size(); ++r) differs = differs || a.rounds[r].a2 != c.rounds[r].a2;
  CHECK(differs);
}

TEST_CASE("win rate and margin summary") {
  const auto f = social_distancing_win_fixture(0.1);
  ExperimentSpec spec{f.base, fixture_policy(f), constant_agent(5), constant_agent(5), 10, expected_mode()};
  const auto s = run_experiment(spec, 4, 1);
  CHECK(s.runs == 4);
  CHECK(s.wins == 4);
  CHECK(s.win_rate == 1.0);
  CHECK(*s.mean_margin == doctest::Approx(5.7));

  const auto g = ipd3();
  ExperimentSpec lose{g, plain(g, C), constant_agent(D), constant_agent(D), 10, expected_mode()};
  const auto l = run_experiment(lose, 3, 1);
  CHECK(l.wins == 0);
  CHECK_FALSE(l.mean_margin);
  CHECK(std::isnan(l.margins[0]));
}

TEST_CASE("sampling follows the distribution") {
  auto rng = make_rng(123);
  const MixedStrategy s((VectorXd(3) << 0.2, 0.5, 0.3).finished());
  VectorXd counts = VectorXd::Zero(3);
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) counts(sample_action(s, rng)) += 1;
  CHECK(counts(0) / draws == doctest::Approx(0.2).epsilon(0.03));
  CHECK(counts(1) / draws == doctest::Approx(0.5).epsilon(0.03));
  CHECK(counts(2) / draws == doctest::Approx(0.3).epsilon(0.03));
  CHECK(sample_action(MixedStrategy::pure(3, 2), rng) == 2);

  auto r1 = make_rng(5), r2 = make_rng(5), r3 = make_rng(6);
  CHECK(r1() == r2());
  CHECK(r2() != r3());
}

TEST_CASE("payoff scales cover every reachable payoff") {
  const auto g = ipd3();
  const auto scales = policy_payoff_scales(g, plain(g, D));
  CHECK(scales[0].lo <= 0.0);
  CHECK(scales[0].hi >= 10.0);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index k = 0; k < 2; ++k) {
        const double u2 = realized_utility(g, {i, j, k}, Player::Two);
        CHECK(std::abs(scales[0].apply(u2)) <= 1.0 + 1e-12);
      }
}

TEST_CASE("the best constant action is reported") {
  const auto g = electric_petrol();
  const auto b = best_constant_baseline(g, mwu_fast(), mwu_fast(), 50, 5, 1);
  CHECK(b.per_action.size() == 2);
  CHECK(b.stats.wins == 0);
  CHECK(b.action == 0);

  const auto ipd = ipd3();
  const auto d = best_constant_baseline(ipd, constant_agent(C), constant_agent(C), 10, 2, 1, expected_mode());
  CHECK(d.action == D);
  CHECK(d.stats.win_rate == 1.0);
}

TEST_CASE("trace csv") {
  const auto g = ipd3();
  const auto tr = run_game(g, plain(g, D), constant_agent(C), constant_agent(D), 3, 1);
  std::ostringstream os;
  write_trace_csv(os, tr);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "round,u1,u2,u3,cost,a1,a2,a3");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
  CHECK(os.str().find("\n1,") != std::string::npos);

  ArenaOptions quiet;
  quiet.record_rounds = false;
  const auto bare = run_game(g, plain(g, D), constant_agent(C), constant_agent(D), 3, 1, quiet);
  CHECK(bare.rounds.empty());
  CHECK(bare.U1 == tr.U1);
}

TEST_CASE("modes") {
  CHECK(parse_utility_mode("expected") == UtilityMode::Expected);
  CHECK(parse_utility_mode("sampled") == UtilityMode::Sampled);
  CHECK_THROWS_AS(parse_utility_mode("average"), std::invalid_argument);
  CHECK_THROWS(run_game(ipd3(), plain(ipd3(), 2), constant_agent(C), constant_agent(C), 3, 1));
  CHECK_THROWS(run_game(ipd3(), plain(ipd3(), C), constant_agent(C), constant_agent(C), 0, 1));
}
