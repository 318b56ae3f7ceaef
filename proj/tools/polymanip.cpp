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

// polymanip: synthesize manipulator policies, verify certificates, run
// learning experiments and rebuild the win-rate tables.
//
// Exit codes: 0 ok, 1 verification failure, 2 no winning policy, 3 bad input,
// 4 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polymanip/experiments.hpp"

namespace pm = polymanip;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInfeasible = 2;
constexpr int kInputError = 3;
constexpr int kInternalError = 4;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    pm::write_text_file(path, text);
  }
}

std::string dump(const pm::Json& j) { return j.dump(2) + "\n"; }

template <class Enum, class Parse>
Enum parse_or_input_error(const std::string& s, Parse parse) {
  try {
    return parse(s);
  } catch (const std::invalid_argument& e) {
    throw pm::InputError(e.what());
  }
}

// --- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string game = "ipd3";
  std::string cls = "type1";
  std::string objective = "min-cost";
  double eps = 0.1;
  bool full = false;
  bool also_win = false;
  std::vector<double> custom;
  std::string sense = "min";
  int threads = 1;
  double tolerance = 1e-7;
  std::string out;
  std::string dump_lp;
};

int run_synth(const SynthArgs& a) {
  const pm::NamedGame game = pm::load_game(a.game);
  pm::SynthesisRequest req{game.game};
  req.policy_class = parse_or_input_error<pm::PolicyClass>(a.cls, pm::parse_policy_class);
  req.objective = parse_or_input_error<pm::Objective>(a.objective, pm::parse_objective);
  req.eps = a.eps;
  req.row_restricted = !a.full;
  req.also_win = a.also_win;
  req.threads = a.threads;
  req.verify_tolerance = a.tolerance;
  if (req.objective == pm::Objective::Custom) {
    if (a.custom.size() != 4) throw pm::InputError("--custom needs four weights: d2,d3,v2,v3");
    if (a.sense != "min" && a.sense != "max") throw pm::InputError("--sense is min or max");
    req.custom = {a.sense == "min" ? pm::Sense::Minimize : pm::Sense::Maximize, a.custom[0],
                  a.custom[1], a.custom[2], a.custom[3]};
  } else if (!a.custom.empty()) {
    throw pm::InputError("--custom only applies to --objective custom");
  }

  pm::SynthesisResult res;
  try {
    res = pm::synthesize(req);
  } catch (const std::invalid_argument& e) {
    throw pm::InputError(e.what());
  }
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";

  if (!a.dump_lp.empty()) {
    // The winning triple's LP, or the first triple's when nothing wins.
    pm::LpOptions lo{req.objective, req.custom, req.row_restricted, req.also_win};
    pm::Triple first{}, second{};
    if (res.certificate) {
      first = res.certificate->phases.front().triple;
      second = res.certificate->phases.back().triple;
    }
    pm::DominanceLp dl =
        req.policy_class == pm::PolicyClass::Type1   ? pm::build_type1_lp(game.game, first, req.eps, lo)
        : req.policy_class == pm::PolicyClass::Type2 ? pm::build_type2_lp(game.game, first, req.eps, lo)
                                                     : pm::build_batch_lp(game.game, first, second, req.eps, lo);
    std::ostringstream os;
    os.precision(17);
    pm::write_lp_text(os, dl.lp);
    pm::write_text_file(a.dump_lp, os.str());
  }

  if (!res.certificate) {
    std::cerr << "no winning policy of class " << a.cls << " at eps " << a.eps << " ("
              << res.lp_count << " LPs solved)\n";
    return kInfeasible;
  }
  pm::Json j;
  j["game"] = game.name;
  j.update(pm::certificate_to_json(*res.certificate));
  j["lp_count"] = res.lp_count;
  j["feasible_count"] = res.feasible_count;
  emit(a.out, dump(j));
  return res.certificate->verification.passed() ? kOk : kVerifyFailed;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::optional<std::string> game, policy, cls, objective, agent2, agent3, mode, out, trace;
  std::optional<double> eps;
  std::optional<long long> T, N;
  std::optional<unsigned long long> seed;
  std::optional<int> threads;
  bool realized_feedback = false;
};

int run_simulate(const SimulateArgs& a) {
  pm::ExperimentConfig cfg;
  if (!a.config.empty()) cfg = pm::config_from_json(pm::read_json_file(a.config));
  try {
    if (a.game) cfg.game = *a.game;
    if (a.policy) cfg.policy = *a.policy;
    if (a.cls) cfg.policy_class = pm::parse_policy_class(*a.cls);
    if (a.objective) cfg.objective = pm::parse_objective(*a.objective);
    if (a.agent2) cfg.agent2 = pm::parse_agent_spec(*a.agent2);
    if (a.agent3) cfg.agent3 = pm::parse_agent_spec(*a.agent3);
    if (a.mode) cfg.mode = pm::parse_utility_mode(*a.mode);
  } catch (const std::invalid_argument& e) {
    throw pm::InputError(e.what());
  }
  if (a.eps) cfg.eps = *a.eps;
  if (a.T) cfg.T = *a.T;
  if (a.N) cfg.N = *a.N;
  if (a.seed) cfg.seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;
  if (a.realized_feedback) cfg.realized_feedback = true;
  if (a.out) cfg.out = *a.out;
  if (a.trace) cfg.trace_out = *a.trace;
  // Re-validate the merged config the same way a file would be.
  cfg = pm::config_from_json(pm::config_to_json(cfg));

  const pm::SimulationOutput out = pm::simulate(cfg);
  if (!cfg.trace_out.empty()) {
    const pm::NamedGame game = pm::load_game(cfg.game);
    pm::ArenaOptions arena{cfg.mode, cfg.realized_feedback, true};
    const auto trace =
        pm::run_game(game.game, *out.policy, cfg.agent2, cfg.agent3, cfg.T, cfg.seed, arena);
    std::ostringstream os;
    pm::write_trace_csv(os, trace);
    pm::write_text_file(cfg.trace_out, os.str());
  }
  emit(cfg.out, dump(pm::simulation_to_json(cfg, out)));
  return kOk;
}

// --- reproduce --------------------------------------------------------------

struct ReproduceArgs {
  std::string id;
  std::string format = "markdown";
  std::optional<long long> N;
  long long T = 100;
  unsigned long long seed = 1;
  double eps = 0.1;
  std::string mode = "sampled";
  int threads = 1;
  std::string out;
};

int run_reproduce(const ReproduceArgs& a) {
  if (a.format != "markdown" && a.format != "csv" && a.format != "json") {
    throw pm::InputError("--format is markdown, csv or json");
  }
  std::vector<std::string> ids;
  if (a.id == "all") {
    ids = pm::table_ids();
  } else {
    ids.push_back(a.id);
  }
  pm::TableOptions opt;
  opt.eps = a.eps;
  opt.horizon = a.T;
  if (a.N) opt.runs = *a.N;
  opt.seed = a.seed;
  opt.mode = parse_or_input_error<pm::UtilityMode>(a.mode, pm::parse_utility_mode);
  opt.threads = a.threads;
  if (opt.horizon < 1 || (opt.runs && *opt.runs < 1)) throw pm::InputError("T and N must be >= 1");

  std::vector<pm::ReproTable> tables;
  for (const auto& id : ids) {
    tables.push_back(pm::reproduce_table(id, opt));
    std::cerr << "finished " << id << "\n";
  }
  std::string text;
  if (a.format == "markdown") {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (i) text += "\n";
      text += pm::table_to_markdown(tables[i]);
    }
  } else if (a.format == "csv") {
    text = pm::table_to_csv(tables);
  } else {
    pm::Json j = pm::Json::array();
    for (const auto& t : tables) j.push_back(pm::table_to_json(t));
    text = dump(j);
  }
  emit(a.out, text);
  return kOk;
}

// --- verify -----------------------------------------------------------------

int run_verify(const std::string& game_name, const std::string& cert_path, double tol,
               const std::string& out) {
  const pm::NamedGame game = pm::load_game(game_name);
  const pm::PolicyCertificate cert = pm::certificate_from_json(pm::read_json_file(cert_path));
  pm::VerificationReport rep;
  try {
    rep = pm::verify_certificate(game.game, cert, tol);
  } catch (const std::invalid_argument& e) {
    throw pm::InputError(std::string("certificate does not fit the game: ") + e.what());
  }
  emit(out, dump(pm::report_to_json(rep)));
  return rep.passed() ? kOk : kVerifyFailed;
}

// --- exports ----------------------------------------------------------------

int run_export_game(const std::string& name, const std::string& out) {
  const pm::NamedGame game = pm::load_game(name);
  pm::Json j;
  j["name"] = game.name;
  j.update(pm::game_to_json(game.game, game.labels));
  emit(out, dump(j));
  return kOk;
}

int run_export_fixture(const std::string& name, double eps, const std::string& out) {
  pm::GameFixture fx = [&] {
    try {
      return pm::builtin_fixture(name, eps);
    } catch (const std::invalid_argument& e) {
      throw pm::InputError(e.what());
    }
  }();
  pm::PolicyCertificate cert = fx.certificate();
  cert.verification = pm::verify_certificate(fx.base, cert);
  pm::Json j;
  j["game"] = fx.game_name;
  j["fixture"] = fx.name;
  j.update(pm::certificate_to_json(cert));
  if (!fx.notes.empty()) j["notes"] = fx.notes;
  emit(out, dump(j));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize and evaluate manipulator policies in three-player polymatrix games"};
  app.require_subcommand(1);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Search for a winning dominance policy");
  synth->add_option("--game", sa.game, "Builtin game name or game JSON path")->capture_default_str();
  synth->add_option("--class", sa.cls, "type1, type2 or batch")->capture_default_str();
  synth->add_option("--objective", sa.objective,
                    "feasibility, min-cost, max-margin, min-inefficiency, max-egalitarian, custom")
      ->capture_default_str();
  synth->add_option("--eps", sa.eps, "Dominance slack")->capture_default_str();
  synth->add_flag("--full", sa.full, "Treat every row of A21 and A31 as a variable");
  synth->add_flag("--also-win", sa.also_win, "Keep the winning rows for max-egalitarian");
  synth->add_option("--custom", sa.custom, "Weights on d2,d3,v2,v3 for the custom objective")
      ->delimiter(',')
      ->expected(4);
  synth->add_option("--sense", sa.sense, "min or max for the custom objective")->capture_default_str();
  synth->add_option("--threads", sa.threads, "Worker threads")->capture_default_str();
  synth->add_option("--tolerance", sa.tolerance, "Verification tolerance")->capture_default_str();
  synth->add_option("--out", sa.out, "Write the certificate here instead of stdout");
  synth->add_option("--dump-lp", sa.dump_lp, "Write the LP of the chosen triple as text");

  SimulateArgs ma;
  auto* simulate = app.add_subcommand("simulate", "Run repeated games against learning agents");
  simulate->add_option("--config", ma.config, "Experiment config JSON");
  simulate->add_option("--game", ma.game, "Builtin game name or game JSON path");
  simulate->add_option("--policy", ma.policy,
                       "table, synth, fixture:<name>, constant:<a>, best-constant, certificate:<path>");
  simulate->add_option("--class", ma.cls, "Policy class for synthesized policies");
  simulate->add_option("--objective", ma.objective, "Objective for synthesized policies");
  simulate->add_option("--eps", ma.eps, "Dominance slack");
  simulate->add_option("--agent2", ma.agent2, "kind[:eta], e.g. mwu:fast, ftrl:0.5, lmwu:slow");
  simulate->add_option("--agent3", ma.agent3, "kind[:eta]");
  simulate->add_option("--T", ma.T, "Rounds per game");
  simulate->add_option("--N", ma.N, "Games (default 200 with an FTRL agent, else 2000)");
  simulate->add_option("--seed", ma.seed, "Base seed; game r uses seed + r");
  simulate->add_option("--mode", ma.mode, "sampled or expected");
  simulate->add_flag("--realized-feedback", ma.realized_feedback,
                     "Feed agents payoffs against sampled opponent actions");
  simulate->add_option("--threads", ma.threads, "Worker threads");
  simulate->add_option("--out", ma.out, "Write stats JSON here instead of stdout");
  simulate->add_option("--trace", ma.trace, "Write a per-round CSV of the first game");

  ReproduceArgs ra;
  auto* reproduce = app.add_subcommand("reproduce", "Rebuild the win-rate tables");
  std::string id_help = "Table id or 'all':";
  for (const auto& id : pm::table_ids()) id_help += " " + id;
  reproduce->add_option("table", ra.id, id_help)->required();
  reproduce->add_option("--format", ra.format, "markdown, csv or json")->capture_default_str();
  reproduce->add_option("--N", ra.N, "Games per row (default 200 with an FTRL agent, else 2000)");
  reproduce->add_option("--T", ra.T, "Rounds per game")->capture_default_str();
  reproduce->add_option("--seed", ra.seed, "Base seed")->capture_default_str();
  reproduce->add_option("--eps", ra.eps, "Dominance slack")->capture_default_str();
  reproduce->add_option("--mode", ra.mode, "sampled or expected")->capture_default_str();
  reproduce->add_option("--threads", ra.threads, "Worker threads")->capture_default_str();
  reproduce->add_option("--out", ra.out, "Write the tables here instead of stdout");

  std::string v_game, v_cert, v_out;
  double v_tol = 1e-7;
  auto* verify = app.add_subcommand("verify", "Check a certificate against a game");
  verify->add_option("--game", v_game, "Builtin game name or game JSON path")->required();
  verify->add_option("--certificate", v_cert, "Certificate JSON")->required();
  verify->add_option("--tolerance", v_tol, "Allowed shortfall on each check")->capture_default_str();
  verify->add_option("--out", v_out, "Write the report here instead of stdout");

  std::string eg_name, eg_out;
  auto* export_game = app.add_subcommand("export-game", "Print a builtin game as JSON");
  export_game->add_option("--game", eg_name, "Builtin game name")->required();
  export_game->add_option("--out", eg_out, "Output path");

  std::string ef_name, ef_out;
  double ef_eps = 0.1;
  auto* export_fixture = app.add_subcommand("export-fixture", "Print a closed-form fixture certificate");
  export_fixture->add_option("--name", ef_name, "Fixture name")->required();
  export_fixture->add_option("--eps", ef_eps, "Dominance slack")->capture_default_str();
  export_fixture->add_option("--out", ef_out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*synth) return run_synth(sa);
    if (*simulate) return run_simulate(ma);
    if (*reproduce) return run_reproduce(ra);
    if (*verify) return run_verify(v_game, v_cert, v_tol, v_out);
    if (*export_game) return run_export_game(eg_name, eg_out);
    if (*export_fixture) return run_export_fixture(ef_name, ef_eps, ef_out);
  } catch (const pm::NoPolicyError& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  } catch (const pm::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const pm::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInputError;
}
