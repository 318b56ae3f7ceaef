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

#include "polymanip/arena.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace polymanip {

const char* to_string(UtilityMode m) {
  return m == UtilityMode::Sampled ? "sampled" : "expected";
}

UtilityMode parse_utility_mode(const std::string& s) {
  if (s == "sampled") return UtilityMode::Sampled;
  if (s == "expected") return UtilityMode::Expected;
  throw std::invalid_argument("unknown mode '" + s + "' (sampled, expected)");
}

std::optional<double> margin(double u1, double u2, double u3) {
  if (u1 > u2 && u1 > u3) return std::min(u1 - u2, u1 - u3);
  return std::nullopt;
}

std::optional<double> margin(const GameTrace& t) { return margin(t.U1, t.U2, t.U3); }

std::mt19937_64 make_rng(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

Index sample_action(const MixedStrategy& s, std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  double cum = 0;
  Index last_positive = 0;
  for (Index a = 0; a < s.size(); ++a) {
    if (s(a) <= 0) continue;
    last_positive = a;
    cum += s(a);
    if (u < cum) return a;
  }
  return last_positive;
}

namespace {

void widen(PayoffScale& s, double v) {
  s.lo = std::min(s.lo, v);
  s.hi = std::max(s.hi, v);
}

}  // namespace

std::array<PayoffScale, 2> policy_payoff_scales(const PolymatrixGame& g,
                                                const ManipulatorPolicy& policy) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::array<PayoffScale, 2> out{PayoffScale{inf, -inf}, PayoffScale{inf, -inf}};
  std::vector<const CompleteStrategy*> parts{&policy.first()};
  if (policy.is_batch()) parts.push_back(&policy.second());
  for (const auto* s : parts) {
    const auto eff = g.with_manipulation(s->A21, s->A31);
    for (Index i = 0; i < g.n(); ++i)
      for (Index j = 0; j < g.m(); ++j)
        for (Index k = 0; k < g.l(); ++k) {
          const ActionProfile p{i, j, k};
          widen(out[0], realized_utility(eff, p, Player::Two));
          widen(out[1], realized_utility(eff, p, Player::Three));
        }
  }
  return out;
}

GameTrace run_game(const PolymatrixGame& g, const ManipulatorPolicy& policy,
                   const AgentSpec& agent2, const AgentSpec& agent3, Index horizon,
                   std::uint64_t seed, const ArenaOptions& opt) {
  if (horizon < 1) throw std::invalid_argument("T must be >= 1");
  policy.validate(g);

  struct Phase {
    PolymatrixGame game;
    double cost;
    MixedStrategy x;
  };
  std::vector<Phase> phases;
  for (const auto* s : {&policy.first(), &policy.second()}) {
    phases.push_back({g.with_manipulation(s->A21, s->A31), manipulation_cost(s->A21, s->A31, g),
                      MixedStrategy::pure(g.n(), s->action)});
  }

  const auto scales = policy_payoff_scales(g, policy);
  Agent p2(agent2, g.m(), horizon, scales[0]);
  Agent p3(agent3, g.l(), horizon, scales[1]);
  auto rng = make_rng(seed);
  const bool sampled = opt.mode == UtilityMode::Sampled;

  GameTrace trace;
  trace.seed = seed;
  trace.horizon = horizon;
  trace.regret2 = RegretLedger(g.m());
  trace.regret3 = RegretLedger(g.l());
  if (opt.record_rounds) trace.rounds.reserve(static_cast<std::size_t>(horizon));
  double sum1 = 0, sum2 = 0, sum3 = 0;

  for (Index t = 1; t <= horizon; ++t) {
    const auto& strat = policy.at_round(t, horizon);
    const Phase& ph = (&strat == &policy.first()) ? phases[0] : phases[1];
    const auto& eff = ph.game;
    const MixedStrategy y = p2.act();
    const MixedStrategy z = p3.act();

    RoundRecord rec;
    rec.round = t;
    rec.a1 = strat.action;
    rec.cost = ph.cost;
    rec.e1 = expected_utility(eff, ph.x, y, z, Player::One, ph.cost);
    rec.e2 = expected_utility(eff, ph.x, y, z, Player::Two);
    rec.e3 = expected_utility(eff, ph.x, y, z, Player::Three);
    if (sampled) {
      rec.a2 = sample_action(y, rng);
      rec.a3 = sample_action(z, rng);
      const ActionProfile prof{rec.a1, rec.a2, rec.a3};
      rec.u1 = realized_utility(eff, prof, Player::One, ph.cost);
      rec.u2 = realized_utility(eff, prof, Player::Two);
      rec.u3 = realized_utility(eff, prof, Player::Three);
    } else {
      rec.u1 = rec.e1;
      rec.u2 = rec.e2;
      rec.u3 = rec.e3;
    }

    VectorXd v2, v3;
    if (sampled && opt.realized_feedback) {
      v2 = counterfactual_payoffs(eff, Player::Two, ph.x, MixedStrategy::pure(g.l(), rec.a3));
      v3 = counterfactual_payoffs(eff, Player::Three, ph.x, MixedStrategy::pure(g.m(), rec.a2));
    } else {
      v2 = counterfactual_payoffs(eff, Player::Two, ph.x, z);
      v3 = counterfactual_payoffs(eff, Player::Three, ph.x, y);
    }
    trace.regret2.record(y, v2);
    trace.regret3.record(z, v3);
    p2.update(v2);
    p3.update(v3);

    sum1 += rec.u1;
    sum2 += rec.u2;
    sum3 += rec.u3;
    if (opt.record_rounds) {
      rec.y = y;
      rec.z = z;
      trace.rounds.push_back(std::move(rec));
    }
  }
  const double T = static_cast<double>(horizon);
  trace.U1 = sum1 / T;
  trace.U2 = sum2 / T;
  trace.U3 = sum3 / T;
  return trace;
}

ExperimentStats run_experiment(const ExperimentSpec& spec, Index runs, std::uint64_t base_seed,
                               int threads) {
  if (runs < 1) throw std::invalid_argument("N must be >= 1");
  ArenaOptions opt = spec.arena;
  opt.record_rounds = false;
  ExperimentStats st;
  st.runs = runs;
  st.seeds.resize(static_cast<std::size_t>(runs));
  st.utilities.resize(static_cast<std::size_t>(runs));

  auto one = [&](Index r) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(r);
    const auto tr = run_game(spec.game, spec.policy, spec.agent2, spec.agent3, spec.horizon, seed, opt);
    st.seeds[r] = seed;
    st.utilities[r] = {tr.U1, tr.U2, tr.U3};
  };
  const int workers = static_cast<int>(std::min<Index>(std::max(1, threads), runs));
  if (workers == 1) {
    for (Index r = 0; r < runs; ++r) one(r);
  } else {
    std::atomic<Index> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (Index r = next++; r < runs; r = next++) one(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = runs;
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  double margin_sum = 0;
  st.margins.assign(static_cast<std::size_t>(runs), std::numeric_limits<double>::quiet_NaN());
  for (Index r = 0; r < runs; ++r) {
    const auto& u = st.utilities[r];
    if (auto m = margin(u[0], u[1], u[2])) {
      ++st.wins;
      margin_sum += *m;
      st.margins[r] = *m;
    }
  }
  st.win_rate = static_cast<double>(st.wins) / static_cast<double>(runs);
  if (st.wins > 0) st.mean_margin = margin_sum / static_cast<double>(st.wins);
  return st;
}

BaselineResult best_constant_baseline(const PolymatrixGame& g, const AgentSpec& agent2,
                                      const AgentSpec& agent3, Index horizon, Index runs,
                                      std::uint64_t base_seed, const ArenaOptions& opt,
                                      int threads) {
  BaselineResult best;
  bool have = false;
  for (Index a = 0; a < g.n(); ++a) {
    ExperimentSpec spec{g, ManipulatorPolicy::constant({a, g.A21(), g.A31()}), agent2, agent3,
                        horizon, opt};
    auto st = run_experiment(spec, runs, base_seed, threads);
    const double m = st.mean_margin.value_or(-std::numeric_limits<double>::infinity());
    const double bm = have ? best.stats.mean_margin.value_or(-std::numeric_limits<double>::infinity())
                           : 0.0;
    const bool better = !have || st.win_rate > best.stats.win_rate ||
                        (st.win_rate == best.stats.win_rate && m > bm);
    best.per_action.push_back(st);
    if (better) {
      best.action = a;
      best.stats = st;
      have = true;
    }
  }
  return best;
}

void write_trace_csv(std::ostream& os, const GameTrace& trace) {
  os << "round,u1,u2,u3,cost,a1,a2,a3\n";
  char buf[256];
  for (const auto& r : trace.rounds) {
    std::snprintf(buf, sizeof buf, "%" PRId64 ",%.17g,%.17g,%.17g,%.17g,%" PRId64 ",",
                  static_cast<std::int64_t>(r.round), r.u1, r.u2, r.u3, r.cost,
                  static_cast<std::int64_t>(r.a1));
    os << buf;
    if (r.a2 >= 0) os << r.a2;
    os << ",";
    if (r.a3 >= 0) os << r.a3;
    os << "\n";
  }
}

}  // namespace polymanip
