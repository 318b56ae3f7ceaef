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

#include "polymanip/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace polymanip {

namespace {

Json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double number_from(const Json& j, const std::string& what) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw InputError(what + " must be a number");
  return j.get<double>();
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

Index index_from(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw InputError(what + " must be an integer");
  return j.get<Index>();
}

}  // namespace

Json matrix_to_json(const MatrixXd& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw InputError(what + " must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw InputError(what + " must have at least one column");
  MatrixXd m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError(what + " rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw InputError(what + " entries must be numbers");
      m(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

Json game_to_json(const PolymatrixGame& g,
                  const std::optional<std::array<std::vector<std::string>, 3>>& labels) {
  Json j;
  j["n"] = g.n();
  j["m"] = g.m();
  j["l"] = g.l();
  j["A12"] = matrix_to_json(g.A12());
  j["A13"] = matrix_to_json(g.A13());
  j["A21"] = matrix_to_json(g.A21());
  j["A23"] = matrix_to_json(g.A23());
  j["A31"] = matrix_to_json(g.A31());
  j["A32"] = matrix_to_json(g.A32());
  if (labels) j["labels"] = Json(*labels);
  return j;
}

PolymatrixGame game_from_json(const Json& j) {
  const std::string where = "game";
  const Index n = index_from(field(j, "n", where), "n");
  const Index m = index_from(field(j, "m", where), "m");
  const Index l = index_from(field(j, "l", where), "l");
  if (n < 1 || m < 1 || l < 1) throw InputError("n, m, l must be >= 1");
  auto get = [&](const char* name, Index rows, Index cols) {
    MatrixXd a = matrix_from_json(field(j, name, where), name);
    try {
      PolymatrixGame::expect_shape(name, a, rows, cols);
    } catch (const DimensionError& e) {
      throw InputError(e.what());
    }
    return a;
  };
  try {
    return PolymatrixGame(get("A12", n, m), get("A13", n, l), get("A21", n, m), get("A23", m, l),
                          get("A31", n, l), get("A32", m, l));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

NamedGame load_game(const std::string& name_or_path) {
  try {
    return builtin_game(name_or_path);
  } catch (const std::invalid_argument&) {
  }
  std::ifstream probe(name_or_path);
  if (!probe) throw InputError("unknown game '" + name_or_path + "' (not a builtin name or readable file)");
  const Json j = read_json_file(name_or_path);
  NamedGame ng{name_or_path, game_from_json(j), {}};
  if (j.contains("labels")) {
    try {
      ng.labels = j.at("labels").get<std::array<std::vector<std::string>, 3>>();
    } catch (const Json::exception& e) {
      throw InputError(std::string("labels: ") + e.what());
    }
  }
  return ng;
}

Json report_to_json(const VerificationReport& rep) {
  Json j;
  j["passed"] = rep.passed();
  j["violations"] = rep.violations();
  j["min_slack"] = number_or_null(rep.min_slack());
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["satisfied"] = c.satisfied;
    cj["slack"] = number_or_null(c.slack);
    if (c.informational) cj["informational"] = true;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

Json certificate_to_json(const PolicyCertificate& cert) {
  Json j;
  j["policy_class"] = to_string(cert.policy_class);
  j["objective"] = to_string(cert.objective);
  j["eps"] = cert.eps;
  j["requires_win"] = cert.requires_win;
  Json phases = Json::array();
  for (const auto& p : cert.phases) {
    Json pj;
    pj["triple"] = {p.triple.i, p.triple.j, p.triple.k};
    pj["action"] = p.strategy.action;
    pj["A21"] = matrix_to_json(p.strategy.A21);
    pj["A31"] = matrix_to_json(p.strategy.A31);
    pj["cost"] = p.cost;
    pj["utilities"] = {p.v1, p.v2, p.v3};
    phases.push_back(std::move(pj));
  }
  j["phases"] = std::move(phases);
  j["cost"] = cert.cost();
  j["margin"] = cert.margin();
  j["objective_value"] = number_or_null(cert.objective_value);
  j["inefficiency_ratio"] = number_or_null(cert.inefficiency_ratio);
  j["inefficiency_ratio_revenue"] = number_or_null(cert.inefficiency_ratio_revenue);
  j["verification"] = report_to_json(cert.verification);
  return j;
}

PolicyCertificate certificate_from_json(const Json& j) {
  const std::string where = "certificate";
  PolicyCertificate cert;
  try {
    cert.policy_class = parse_policy_class(field(j, "policy_class", where).get<std::string>());
    if (j.contains("objective")) cert.objective = parse_objective(j.at("objective").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  } catch (const Json::exception& e) {
    throw InputError(e.what());
  }
  cert.eps = number_from(field(j, "eps", where), "eps");
  if (j.contains("requires_win")) cert.requires_win = j.at("requires_win").get<bool>();
  const Json& phases = field(j, "phases", where);
  if (!phases.is_array()) throw InputError("phases must be an array");
  for (const auto& pj : phases) {
    PhaseCertificate p;
    const Json& t = field(pj, "triple", "phase");
    if (!t.is_array() || t.size() != 3) throw InputError("triple must have three entries");
    p.triple = {index_from(t[0], "triple"), index_from(t[1], "triple"), index_from(t[2], "triple")};
    p.strategy.action = index_from(field(pj, "action", "phase"), "action");
    p.strategy.A21 = matrix_from_json(field(pj, "A21", "phase"), "A21");
    p.strategy.A31 = matrix_from_json(field(pj, "A31", "phase"), "A31");
    if (pj.contains("cost")) p.cost = number_from(pj.at("cost"), "cost");
    if (pj.contains("utilities")) {
      const Json& u = pj.at("utilities");
      if (!u.is_array() || u.size() != 3) throw InputError("utilities must have three entries");
      p.v1 = number_from(u[0], "utility");
      p.v2 = number_from(u[1], "utility");
      p.v3 = number_from(u[2], "utility");
    }
    cert.phases.push_back(std::move(p));
  }
  if (j.contains("objective_value")) cert.objective_value = number_from(j.at("objective_value"), "objective_value");
  if (j.contains("inefficiency_ratio")) cert.inefficiency_ratio = number_from(j.at("inefficiency_ratio"), "ratio");
  if (j.contains("inefficiency_ratio_revenue")) {
    cert.inefficiency_ratio_revenue = number_from(j.at("inefficiency_ratio_revenue"), "ratio");
  }
  return cert;
}

Json stats_to_json(const ExperimentStats& st) {
  Json j;
  j["runs"] = st.runs;
  j["wins"] = st.wins;
  j["win_rate"] = st.win_rate;
  j["mean_margin"] = st.mean_margin ? Json(*st.mean_margin) : Json(nullptr);
  Json per = Json::array();
  for (std::size_t r = 0; r < st.seeds.size(); ++r) {
    Json rj;
    rj["seed"] = st.seeds[r];
    rj["U"] = {st.utilities[r][0], st.utilities[r][1], st.utilities[r][2]};
    rj["margin"] = number_or_null(st.margins[r]);
    per.push_back(std::move(rj));
  }
  j["per_run"] = std::move(per);
  return j;
}

Index ExperimentConfig::runs() const {
  if (N) return *N;
  return agent2.kind == AgentKind::FTRL || agent3.kind == AgentKind::FTRL ? 200 : 2000;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["game"] = c.game;
  j["policy"] = c.policy;
  j["class"] = to_string(c.policy_class);
  j["objective"] = to_string(c.objective);
  j["eps"] = c.eps;
  j["agent2"] = format_agent_spec(c.agent2);
  j["agent3"] = format_agent_spec(c.agent3);
  j["T"] = c.T;
  j["N"] = c.N ? Json(*c.N) : Json(nullptr);
  j["seed"] = c.seed;
  j["mode"] = to_string(c.mode);
  j["realized_feedback"] = c.realized_feedback;
  j["threads"] = c.threads;
  j["out"] = c.out;
  j["trace_out"] = c.trace_out;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  static const std::set<std::string> known = {
      "game", "policy", "class", "objective", "eps", "agent2", "agent3", "T", "N", "seed",
      "mode", "realized_feedback", "threads", "out", "trace_out"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw InputError("unknown config field '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (j.contains("game")) c.game = j.at("game").get<std::string>();
    if (j.contains("policy")) c.policy = j.at("policy").get<std::string>();
    if (j.contains("class")) c.policy_class = parse_policy_class(j.at("class").get<std::string>());
    if (j.contains("objective")) c.objective = parse_objective(j.at("objective").get<std::string>());
    if (j.contains("eps")) c.eps = j.at("eps").get<double>();
    if (j.contains("agent2")) c.agent2 = parse_agent_spec(j.at("agent2").get<std::string>());
    if (j.contains("agent3")) c.agent3 = parse_agent_spec(j.at("agent3").get<std::string>());
    if (j.contains("T")) c.T = j.at("T").get<Index>();
    if (j.contains("N") && !j.at("N").is_null()) c.N = j.at("N").get<Index>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mode")) c.mode = parse_utility_mode(j.at("mode").get<std::string>());
    if (j.contains("realized_feedback")) c.realized_feedback = j.at("realized_feedback").get<bool>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("trace_out")) c.trace_out = j.at("trace_out").get<std::string>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (c.T < 1) throw InputError("T must be >= 1");
  if (c.N && *c.N < 1) throw InputError("N must be >= 1");
  if (!(c.eps > 0)) throw InputError("eps must be positive");
  return c;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace polymanip
