#include <doctest.h>

#include <cmath>
#include <random>

#include "polymanip/agents.hpp"

using namespace polymanip;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Index>(v.size()));
  Index a = 0;
  for (double x : v) out(a++) = x;
  return out;
}

AgentSpec spec(AgentKind kind, std::optional<double> eta = std::nullopt) {
  AgentSpec s;
  s.kind = kind;
  s.eta = eta;
  return s;
}

// Plays `agent` against a fixed payoff sequence and returns its average regret.
template <class Feed>
double regret_of(Agent& agent, Index horizon, Feed feed) {
  RegretLedger ledger(agent.num_actions());
  for (Index t = 0; t < horizon; ++t) {
    const VectorXd v = feed(t);
    ledger.record(agent.act(), v);
    agent.update(v);
  }
  return average_regret(ledger);
}

}  // namespace

TEST_CASE("every learner starts uniform or at its first action") {
  for (auto k : {AgentKind::MWU, AgentKind::FTRL, AgentKind::LMWU}) {
    const Agent a(spec(k), 4, 100);
    CHECK(a.act().probs().isApprox(VectorXd::Constant(4, 0.25)));
  }
  CHECK(Agent(spec(AgentKind::FTL), 3, 10).act().probs() == VectorXd::Unit(3, 0));
  AgentSpec c = spec(AgentKind::Constant);
  c.constant_action = 2;
  CHECK(Agent(c, 3, 10).act().probs() == VectorXd::Unit(3, 2));
  c.constant_action = 3;
  CHECK_THROWS_AS(Agent(c, 3, 10), std::out_of_range);
}

TEST_CASE("one multiplicative-weights step by hand") {
  Agent a(spec(AgentKind::MWU, 0.5), 2, 10);
  a.update(vec({1, 0}));
  const double e = std::exp(0.5);
  CHECK(a.act()(0) == doctest::Approx(e / (e + 1)).epsilon(1e-15));
  CHECK(a.act()(0) == doctest::Approx(0.6225).epsilon(1e-4));
  CHECK(a.act()(1) == doctest::Approx(0.3775).epsilon(1e-4));
  CHECK(a.round() == 1);
}

TEST_CASE("one linear multiplicative-weights step by hand") {
  Agent a(spec(AgentKind::LMWU, 0.2), 2, 10);
  a.update(vec({1, -1}));
  // Weights 0.5 * 1.2 and 0.5 * 0.8.
  CHECK(a.act()(0) == doctest::Approx(0.6));
  CHECK(a.act()(1) == doctest::Approx(0.4));
}

TEST_CASE("multiplicative weights and entropic FTRL coincide") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  Agent mwu(spec(AgentKind::MWU, 0.7), 3, 50), ftrl(spec(AgentKind::FTRL, 0.7), 3, 50);
  for (int t = 0; t < 50; ++t) {
    const VectorXd v = vec({u(rng), u(rng), u(rng)});
    mwu.update(v);
    ftrl.update(v);
    CHECK((mwu.act().probs() - ftrl.act().probs()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("default learning rates") {
  CHECK(default_learning_rate(AgentKind::MWU, 2, 100) == doctest::Approx(std::sqrt(8 * std::log(2.0) / 100)));
  CHECK(default_learning_rate(AgentKind::FTRL, 12, 1000) ==
        doctest::Approx(std::sqrt(8 * std::log(12.0) / 1000)));
  CHECK(default_learning_rate(AgentKind::LMWU, 5, 10) == 0.01);
  CHECK(default_learning_rate(AgentKind::FTL, 5, 10) == 0.0);
  CHECK(Agent(spec(AgentKind::MWU), 2, 100).eta() == default_learning_rate(AgentKind::MWU, 2, 100));
}

TEST_CASE("follow the leader") {
  Agent a(spec(AgentKind::FTL), 3, 10);
  a.update(vec({0, 1, 0.5}));
  CHECK(a.act().probs() == VectorXd::Unit(3, 1));
  a.update(vec({0, -1, 0}));
  // Cumulative (0, 0, 0.5).
  CHECK(a.act().probs() == VectorXd::Unit(3, 2));
  a.update(vec({0.5, 0, 0}));
  // A tie keeps the lower index.
  CHECK(a.act().probs() == VectorXd::Unit(3, 0));
}

TEST_CASE("follow the leader has linear regret on the alternating sequence") {
  auto feed = [](Index t) { return t == 0 ? vec({0.5, 0}) : t % 2 == 1 ? vec({0, 1}) : vec({1, 0}); };
  Agent ftl(spec(AgentKind::FTL), 2, 1000);
  CHECK(regret_of(ftl, 1000, feed) >= 0.49);
  Agent mwu(spec(AgentKind::MWU), 2, 1000);
  CHECK(regret_of(mwu, 1000, feed) <= 0.05);
}

TEST_CASE("no-regret learners meet the hedge bound on random payoffs") {
  // Payoffs in [-1, 1] with rate eta: regret <= ln m / eta + eta T / 2.
  const Index horizon = 2000, m = 3;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<VectorXd> seq;
  for (Index t = 0; t < horizon; ++t) seq.push_back(vec({u(rng) * 0.2 + 0.1, u(rng), u(rng) * 0.5}));
  auto feed = [&](Index t) { return seq[static_cast<std::size_t>(t)]; };
  for (auto k : {AgentKind::MWU, AgentKind::FTRL}) {
    Agent a(spec(k), m, horizon);
    const double eta = a.eta();
    const double bound = (std::log(3.0) / eta + eta * horizon / 2) / horizon;
    CHECK(regret_of(a, horizon, feed) <= bound);
  }
  Agent lin(spec(AgentKind::LMWU, 0.05), m, horizon);
  CHECK(regret_of(lin, horizon, feed) <= (std::log(3.0) / 0.05 + 0.05 * horizon) / horizon);
}

TEST_CASE("payoff scaling") {
  const PayoffScale s{0, 10};
  CHECK(s.apply(0.0) == -1.0);
  CHECK(s.apply(10.0) == 1.0);
  CHECK(s.apply(5.0) == 0.0);
  CHECK(PayoffScale{3, 3}.apply(7.0) == 0.0);
  CHECK(s.apply(vec({0, 2.5})).isApprox(vec({-1, -0.5})));

  // A scaled and an unscaled agent see the same feedback.
  Agent raw(spec(AgentKind::MWU, 1.0), 2, 10), scaled(spec(AgentKind::MWU, 1.0), 2, 10, s);
  raw.update(vec({1, 0}));
  scaled.update(vec({10, 5}));
  CHECK(raw.act().probs().isApprox(scaled.act().probs()));
}

TEST_CASE("linear weights reject payoffs they cannot represent") {
  Agent a(spec(AgentKind::LMWU, 0.1), 2, 10);
  CHECK_THROWS_AS(a.update(vec({1.5, 0})), std::domain_error);
  Agent b(spec(AgentKind::LMWU, 2.0), 2, 10);
  CHECK_THROWS_AS(b.update(vec({-1, 1})), std::domain_error);
  Agent c(spec(AgentKind::MWU, 0.1), 2, 10);
  CHECK_THROWS_AS(c.update(vec({1, 0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(c.update(vec({NAN, 0})), std::invalid_argument);
}

TEST_CASE("agent specs") {
  CHECK(parse_agent_spec("mwu").kind == AgentKind::MWU);
  CHECK_FALSE(parse_agent_spec("mwu").eta);
  CHECK(*parse_agent_spec("FTRL:0.5").eta == 0.5);
  CHECK(*parse_agent_spec("mwu:fast").eta == kFastRate);
  CHECK(*parse_agent_spec("lmwu:slow").eta == kSlowRate);
  CHECK(parse_agent_spec("constant:2").constant_action == 2);
  for (const char* bad : {"adam", "mwu:abc", "mwu:-1", "ftl:1", "constant", "constant:1.5", "lmwu:fast"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_agent_spec(bad), std::invalid_argument);
  }
  CHECK(format_agent_spec(parse_agent_spec("lmwu:slow")) == "lmwu:0.15");
  CHECK(format_agent_spec(parse_agent_spec("mwu:fast")) == "mwu:32");
  CHECK(format_agent_spec(parse_agent_spec("ftl")) == "ftl");
  CHECK(format_agent_spec(parse_agent_spec("constant:4")) == "constant:4");
  for (const char* text : {"mwu:0.1", "ftrl:3.25", "lmwu:0.015"}) {
    CHECK(format_agent_spec(parse_agent_spec(text)) == text);
  }
}

TEST_CASE("regret ledger") {
  RegretLedger l(2);
  l.record(MixedStrategy::uniform(2), vec({1, 0}));
  l.record(MixedStrategy::pure(2, 1), vec({1, 0}));
  CHECK(l.rounds() == 2);
  CHECK(l.realized_total() == 0.5);
  CHECK(average_regret(l) == doctest::Approx(0.75));
  CHECK(average_regret(l, 4) == doctest::Approx(0.375));
  CHECK_THROWS_AS(average_regret(l, 0), std::invalid_argument);
  CHECK_THROWS_AS(l.record(MixedStrategy::uniform(3), vec({1, 0})), std::invalid_argument);
}
