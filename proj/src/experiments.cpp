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

#include "polymanip/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace polymanip {

namespace {

constexpr double kVerifyTolerance = 1e-7;

std::optional<NamedGame> try_builtin(const std::string& name) {
  try {
    return builtin_game(name);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

ResolvedPolicy from_synthesis(const PolymatrixGame& g, PolicyClass cls, Objective obj, double eps,
                              int threads) {
  SynthesisRequest req{g};
  req.policy_class = cls;
  req.objective = obj;
  req.eps = eps;
  req.threads = threads;
  auto res = synthesize(req);
  if (!res.certificate) {
    throw NoPolicyError(std::string("no winning policy of class ") + to_string(cls) + " at eps " +
                        std::to_string(eps));
  }
  std::string desc = std::string("synthesized ") + to_string(cls) + " " + to_string(obj);
  return {res.certificate->policy(), desc, res.certificate};
}

Index parse_index(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long long v = -1;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 0) throw InputError("bad " + what + " '" + s + "'");
  return static_cast<Index>(v);
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

ResolvedPolicy table_policy(const std::string& game_name, double eps) {
  const NamedGame game = builtin_game(game_name);
  const std::string fixture_name = table_fixture_for(game.name);
  // A fixture at eps = 0 is always constructible and tells us its class.
  const PolicyClass cls = builtin_fixture(fixture_name, 0.0).policy_class;
  try {
    const GameFixture fx = builtin_fixture(fixture_name, eps);
    PolicyCertificate cert = fx.certificate();
    cert.verification = verify_certificate(fx.base, cert, kVerifyTolerance);
    if (cert.verification.passed()) {
      return {cert.policy(), "fixture " + fixture_name + " (" + to_string(cls) + ")", cert};
    }
  } catch (const std::invalid_argument&) {
    // eps outside the fixture's range
  }
  return from_synthesis(game.game, cls, Objective::MinCost, eps, 1);
}

ResolvedPolicy resolve_policy(const ExperimentConfig& cfg, const NamedGame& game) {
  const std::string& src = cfg.policy;
  const PolymatrixGame& g = game.game;
  if (src == "table") {
    if (try_builtin(cfg.game)) return table_policy(cfg.game, cfg.eps);
    return from_synthesis(g, cfg.policy_class, Objective::MinCost, cfg.eps, cfg.threads);
  }
  if (src == "synth") {
    if (cfg.objective == Objective::Custom) {
      throw InputError("the custom objective is only available through the synth command");
    }
    return from_synthesis(g, cfg.policy_class, cfg.objective, cfg.eps, cfg.threads);
  }
  if (starts_with(src, "fixture:")) {
    const std::string name = src.substr(8);
    GameFixture fx = [&] {
      try {
        return builtin_fixture(name, cfg.eps);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
    }();
    const auto builtin = try_builtin(cfg.game);
    if (!builtin || builtin->name != fx.game_name) {
      throw InputError("fixture '" + name + "' belongs to game '" + fx.game_name + "'");
    }
    PolicyCertificate cert = fx.certificate();
    cert.verification = verify_certificate(fx.base, cert, kVerifyTolerance);
    std::string desc = "fixture " + name + " (" + to_string(fx.policy_class) + ")";
    if (!cert.verification.passed()) desc += ", unverified at this eps";
    return {cert.policy(), desc, cert};
  }
  if (starts_with(src, "constant:")) {
    const Index a = parse_index(src.substr(9), "constant action");
    if (a >= g.n()) throw InputError("constant action out of range");
    return {ManipulatorPolicy::constant({a, g.A21(), g.A31()}), "constant " + std::to_string(a),
            std::nullopt};
  }
  if (starts_with(src, "certificate:")) {
    const std::string path = src.substr(12);
    PolicyCertificate cert = certificate_from_json(read_json_file(path));
    try {
      cert.verification = verify_certificate(g, cert, kVerifyTolerance);
    } catch (const std::exception& e) {
      throw InputError("certificate does not fit the game: " + std::string(e.what()));
    }
    if (!cert.verification.passed()) {
      throw VerificationError("certificate '" + path + "' fails verification");
    }
    return {cert.policy(), "certificate " + path, cert};
  }
  throw InputError("unknown policy source '" + src +
                   "' (table, synth, fixture:<name>, constant:<a>, best-constant, "
                   "certificate:<path>)");
}

SimulationOutput simulate(const ExperimentConfig& cfg) {
  const NamedGame game = load_game(cfg.game);
  ArenaOptions arena{cfg.mode, cfg.realized_feedback, false};
  SimulationOutput out;
  if (cfg.policy == "best-constant") {
    auto best = best_constant_baseline(game.game, cfg.agent2, cfg.agent3, cfg.T, cfg.runs(),
                                       cfg.seed, arena, cfg.threads);
    out.stats = std::move(best.stats);
    out.constant_action = best.action;
    out.policy_description = "best constant " + std::to_string(best.action);
    out.policy = ManipulatorPolicy::constant({best.action, game.game.A21(), game.game.A31()});
    return out;
  }
  auto resolved = resolve_policy(cfg, game);
  ExperimentSpec spec{game.game, resolved.policy, cfg.agent2, cfg.agent3, cfg.T, arena};
  out.stats = run_experiment(spec, cfg.runs(), cfg.seed, cfg.threads);
  out.policy_description = resolved.description;
  out.policy = resolved.policy;
  return out;
}

Json simulation_to_json(const ExperimentConfig& cfg, const SimulationOutput& out) {
  Json j;
  j["config"] = config_to_json(cfg);
  j["policy"] = out.policy_description;
  if (out.constant_action) j["constant_action"] = *out.constant_action;
  j["stats"] = stats_to_json(out.stats);
  return j;
}

std::vector<std::string> table_ids() {
  std::vector<std::string> ids;
  for (const char* g : {"ipd3", "social-distancing", "electric-petrol", "bob"}) {
    ids.push_back(std::string(g) + "-constant");
    ids.push_back(std::string(g) + "-policy");
  }
  return ids;
}

std::vector<std::pair<AgentSpec, AgentSpec>> table_agent_pairs() {
  const AgentSpec mwu{AgentKind::MWU, kFastRate, 0};
  const AgentSpec ftrl{AgentKind::FTRL, kFastRate, 0};
  const AgentSpec lmwu{AgentKind::LMWU, kSlowRate, 0};
  return {{mwu, ftrl}, {mwu, lmwu}, {lmwu, lmwu}};
}

ReproTable reproduce_table(const std::string& id, const TableOptions& opt) {
  const auto ids = table_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    throw InputError("unknown table id '" + id + "'");
  }
  ReproTable t;
  t.id = id;
  t.best_constant = id.size() > 9 && id.compare(id.size() - 9, 9, "-constant") == 0;
  t.game = id.substr(0, id.rfind('-'));
  t.eps = opt.eps;
  t.horizon = opt.horizon;
  t.seed = opt.seed;

  const NamedGame game = builtin_game(t.game);
  const ArenaOptions arena{opt.mode, false, false};
  std::optional<ResolvedPolicy> policy;
  if (t.best_constant) {
    t.policy_description = "best constant action per row, unmodified payoffs";
  } else {
    policy = table_policy(t.game, opt.eps);
    t.policy_description = policy->description;
  }

  for (const auto& [a2, a3] : table_agent_pairs()) {
    const bool ftrl = a2.kind == AgentKind::FTRL || a3.kind == AgentKind::FTRL;
    const Index runs = opt.runs.value_or(ftrl ? 200 : 2000);
    TableRow row{a2, a3, std::nullopt, {}};
    if (t.best_constant) {
      auto best = best_constant_baseline(game.game, a2, a3, opt.horizon, runs, opt.seed, arena,
                                         opt.threads);
      row.constant_action = best.action;
      row.stats = std::move(best.stats);
    } else {
      ExperimentSpec spec{game.game, policy->policy, a2, a3, opt.horizon, arena};
      row.stats = run_experiment(spec, runs, opt.seed, opt.threads);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Json table_to_json(const ReproTable& t) {
  Json j;
  j["id"] = t.id;
  j["game"] = t.game;
  j["kind"] = t.best_constant ? "best-constant" : "policy";
  j["policy"] = t.policy_description;
  j["eps"] = t.eps;
  j["T"] = t.horizon;
  j["seed"] = t.seed;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json rj;
    rj["agent2"] = format_agent_spec(r.agent2);
    rj["agent3"] = format_agent_spec(r.agent3);
    if (r.constant_action) rj["action"] = *r.constant_action;
    rj["runs"] = r.stats.runs;
    rj["wins"] = r.stats.wins;
    rj["win_rate"] = r.stats.win_rate;
    rj["mean_margin"] = r.stats.mean_margin ? Json(*r.stats.mean_margin) : Json(nullptr);
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string table_to_markdown(const ReproTable& t) {
  const NamedGame game = builtin_game(t.game);
  std::ostringstream os;
  char buf[64];
  os << "### " << t.id << "\n\n";
  std::snprintf(buf, sizeof buf, "%g", t.eps);
  os << "game: " << t.game << "; policy: " << t.policy_description << "; eps " << buf << "; T "
     << t.horizon << "; base seed " << t.seed << "\n\n";
  os << "| agent 2 | agent 3 |" << (t.best_constant ? " action |" : "")
     << " N | win rate | margin |\n";
  os << "|---|---|" << (t.best_constant ? "---|" : "") << "---|---|---|\n";
  for (const auto& r : t.rows) {
    os << "| " << format_agent_spec(r.agent2) << " | " << format_agent_spec(r.agent3) << " |";
    if (r.constant_action) {
      const auto& labels = game.labels[0];
      const auto a = static_cast<std::size_t>(*r.constant_action);
      os << " " << (a < labels.size() ? labels[a] : std::to_string(a)) << " |";
    }
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * r.stats.win_rate);
    os << " " << r.stats.runs << " | " << buf << " |";
    if (r.stats.mean_margin) {
      std::snprintf(buf, sizeof buf, "%.3f", *r.stats.mean_margin);
      os << " " << buf << " |\n";
    } else {
      os << " - |\n";
    }
  }
  return os.str();
}

std::string table_to_csv(const std::vector<ReproTable>& tables) {
  std::ostringstream os;
  os << "id,game,kind,agent2,agent3,action,runs,wins,win_rate,mean_margin\n";
  char buf[64];
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      os << t.id << "," << t.game << "," << (t.best_constant ? "best-constant" : "policy") << ","
         << format_agent_spec(r.agent2) << "," << format_agent_spec(r.agent3) << ",";
      if (r.constant_action) os << *r.constant_action;
      os << "," << r.stats.runs << "," << r.stats.wins << ",";
      std::snprintf(buf, sizeof buf, "%.17g", r.stats.win_rate);
      os << buf << ",";
      if (r.stats.mean_margin) {
        std::snprintf(buf, sizeof buf, "%.17g", *r.stats.mean_margin);
        os << buf;
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace polymanip
