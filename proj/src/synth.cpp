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

#include "polymanip/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace polymanip {

const char* to_string(PolicyClass c) {
  switch (c) {
    case PolicyClass::Type1: return "type1";
    case PolicyClass::Type2: return "type2";
    case PolicyClass::Batch: return "batch";
  }
  return "?";
}

const char* to_string(Objective o) {
  switch (o) {
    case Objective::Feasibility: return "feasibility";
    case Objective::MaxMargin: return "max-margin";
    case Objective::MinInefficiency: return "min-inefficiency";
    case Objective::MaxEgalitarian: return "max-egalitarian";
    case Objective::MinCost: return "min-cost";
    case Objective::Custom: return "custom";
  }
  return "?";
}

PolicyClass parse_policy_class(const std::string& s) {
  for (auto c : {PolicyClass::Type1, PolicyClass::Type2, PolicyClass::Batch}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown policy class '" + s + "' (type1, type2, batch)");
}

Objective parse_objective(const std::string& s) {
  for (auto o : {Objective::Feasibility, Objective::MaxMargin, Objective::MinInefficiency,
                 Objective::MaxEgalitarian, Objective::MinCost, Objective::Custom}) {
    if (s == to_string(o)) return o;
  }
  throw std::invalid_argument(
      "unknown objective '" + s +
      "' (feasibility, max-margin, min-inefficiency, max-egalitarian, min-cost, custom)");
}

ManipulatorPolicy ManipulatorPolicy::constant(CompleteStrategy s) {
  return ManipulatorPolicy(std::move(s));
}

ManipulatorPolicy ManipulatorPolicy::batch(CompleteStrategy first, CompleteStrategy second) {
  ManipulatorPolicy p(std::move(first));
  p.second_ = std::move(second);
  return p;
}

const CompleteStrategy& ManipulatorPolicy::at_round(Index t, Index horizon) const {
  if (!is_batch()) return first_;
  const Index switch_round = (horizon + 1) / 2;
  return t <= switch_round ? first_ : *second_;
}

void ManipulatorPolicy::validate(const PolymatrixGame& g) const {
  auto check = [&](const CompleteStrategy& s) {
    if (s.action < 0 || s.action >= g.n()) throw std::out_of_range("policy action out of range");
    PolymatrixGame::expect_shape("A21", s.A21, g.n(), g.m());
    PolymatrixGame::expect_shape("A31", s.A31, g.n(), g.l());
  };
  check(first_);
  if (second_) check(*second_);
}

Index VerificationReport::violations() const {
  return static_cast<Index>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) {
    return !c.informational && !c.satisfied;
  }));
}

double VerificationReport::min_slack() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) {
    if (!c.informational) worst = std::min(worst, c.slack);
  }
  return worst;
}

ManipulatorPolicy PolicyCertificate::policy() const {
  if (phases.empty()) throw std::logic_error("certificate has no phases");
  if (phases.size() == 1) return ManipulatorPolicy::constant(phases[0].strategy);
  return ManipulatorPolicy::batch(phases[0].strategy, phases[1].strategy);
}

double PolicyCertificate::cost() const {
  double c = 0;
  for (const auto& p : phases) c += p.cost;
  return c;
}

double PolicyCertificate::margin() const {
  double s1 = 0, s2 = 0, s3 = 0;
  for (const auto& p : phases) {
    s1 += p.v1;
    s2 += p.v2;
    s3 += p.v3;
  }
  return std::min(s1 - s2, s1 - s3);
}

double min_revenue(const PolymatrixGame& g) {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < g.n(); ++i) {
    best = std::min(best, g.A12().row(i).minCoeff() + g.A13().row(i).minCoeff());
  }
  return best;
}

namespace {

DominanceBlock add_block(LinearProgram& lp, const PolymatrixGame& g, const Triple& t, double eps,
                         bool type2, bool row_restricted, const std::string& tag) {
  if (t.i < 0 || t.i >= g.n() || t.j < 0 || t.j >= g.m() || t.k < 0 || t.k >= g.l()) {
    throw std::out_of_range("triple out of range");
  }
  if (!(eps > 0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive");
  DominanceBlock b;
  b.triple = t;
  b.revenue = g.A12()(t.i, t.j) + g.A13()(t.i, t.k);
  b.d2 = lp.add_variable(0.0, LinearProgram::kInf, tag + "d2");
  b.d3 = lp.add_variable(0.0, LinearProgram::kInf, tag + "d3");
  for (Index k = 0; k < g.l(); ++k) b.v2.push_back(lp.add_free_variable(tag + "v2_" + std::to_string(k)));
  if (type2) {
    b.v3.push_back(lp.add_free_variable(tag + "v3"));
  } else {
    for (Index j = 0; j < g.m(); ++j) b.v3.push_back(lp.add_free_variable(tag + "v3_" + std::to_string(j)));
  }
  b.a21 = Matrix<Index>::Constant(g.n(), g.m(), -1);
  b.a31 = Matrix<Index>::Constant(g.n(), g.l(), -1);
  for (Index i = 0; i < g.n(); ++i) {
    if (row_restricted && i != t.i) continue;
    for (Index j = 0; j < g.m(); ++j) {
      b.a21(i, j) = lp.add_free_variable(tag + "A21_" + std::to_string(i) + "_" + std::to_string(j));
    }
    for (Index k = 0; k < g.l(); ++k) {
      b.a31(i, k) = lp.add_free_variable(tag + "A31_" + std::to_string(i) + "_" + std::to_string(k));
    }
  }

  // |A - A0| <= d, entrywise.
  for (Index i = 0; i < g.n(); ++i) {
    for (Index j = 0; j < g.m(); ++j) {
      if (b.a21(i, j) < 0) continue;
      lp.add_constraint({{b.a21(i, j), 1.0}, {b.d2, -1.0}}, Relation::LessEqual, g.A21()(i, j));
      lp.add_constraint({{b.a21(i, j), -1.0}, {b.d2, -1.0}}, Relation::LessEqual, -g.A21()(i, j));
    }
    for (Index k = 0; k < g.l(); ++k) {
      if (b.a31(i, k) < 0) continue;
      lp.add_constraint({{b.a31(i, k), 1.0}, {b.d3, -1.0}}, Relation::LessEqual, g.A31()(i, k));
      lp.add_constraint({{b.a31(i, k), -1.0}, {b.d3, -1.0}}, Relation::LessEqual, -g.A31()(i, k));
    }
  }

  // Player 2: the target pins v2_k, every other action trails it by eps.
  for (Index k = 0; k < g.l(); ++k) {
    lp.add_constraint({{b.a21(t.i, t.j), 1.0}, {b.v2[k], -1.0}}, Relation::Equal,
                      -g.A23()(t.j, k));
    for (Index j = 0; j < g.m(); ++j) {
      if (j == t.j) continue;
      lp.add_constraint({{b.a21(t.i, j), 1.0}, {b.v2[k], -1.0}}, Relation::LessEqual,
                        -g.A23()(j, k) - eps);
    }
  }

  // Player 3: against every action of player 2, or only against j*.
  for (Index j = 0; j < g.m(); ++j) {
    if (type2 && j != t.j) continue;
    const Index v = type2 ? b.v3[0] : b.v3[j];
    lp.add_constraint({{b.a31(t.i, t.k), 1.0}, {v, -1.0}}, Relation::Equal, -g.A32()(j, t.k));
    for (Index k = 0; k < g.l(); ++k) {
      if (k == t.k) continue;
      lp.add_constraint({{b.a31(t.i, k), 1.0}, {v, -1.0}}, Relation::LessEqual,
                        -g.A32()(j, k) - eps);
    }
  }
  return b;
}

// v2* + d2 + d3 <= rev and v3* + d2 + d3 <= rev, i.e. v1 >= v2*, v3*.
void add_winning_rows(LinearProgram& lp, const DominanceBlock& b) {
  for (Index v : {b.v2_star(), b.v3_star()}) {
    lp.add_constraint({{v, 1.0}, {b.d2, 1.0}, {b.d3, 1.0}}, Relation::LessEqual, b.revenue);
  }
}

std::vector<std::pair<Index, double>> custom_terms(const DominanceBlock& b,
                                                   const CustomObjective& c) {
  return {{b.d2, c.d2}, {b.d3, c.d3}, {b.v2_star(), c.v2}, {b.v3_star(), c.v3}};
}

DominanceLp build_dominance(const PolymatrixGame& g, const Triple& t, double eps,
                            const LpOptions& opt, bool type2) {
  DominanceLp out;
  auto& lp = out.lp;
  out.blocks.push_back(add_block(lp, g, t, eps, type2, opt.row_restricted, ""));
  const auto& b = out.blocks[0];
  switch (opt.objective) {
    case Objective::Feasibility:
      add_winning_rows(lp, b);
      break;
    case Objective::MinCost:
    case Objective::MinInefficiency:
      add_winning_rows(lp, b);
      lp.set_objective(Sense::Minimize, {{b.d2, 1.0}, {b.d3, 1.0}});
      break;
    case Objective::MaxMargin:
      // v0 <= v1 - v2*, v0 <= v1 - v3*, v0 >= 0; the last makes the winning
      // rows redundant.
      out.v0 = lp.add_variable(0.0, LinearProgram::kInf, "v0");
      for (Index v : {b.v2_star(), b.v3_star()}) {
        lp.add_constraint({{out.v0, 1.0}, {v, 1.0}, {b.d2, 1.0}, {b.d3, 1.0}},
                          Relation::LessEqual, b.revenue);
      }
      lp.set_objective(Sense::Maximize, {{out.v0, 1.0}});
      break;
    case Objective::MaxEgalitarian:
      out.v0 = lp.add_free_variable("v0");
      lp.add_constraint({{out.v0, 1.0}, {b.d2, 1.0}, {b.d3, 1.0}}, Relation::LessEqual,
                        b.revenue);
      lp.add_constraint({{out.v0, 1.0}, {b.v2_star(), -1.0}}, Relation::LessEqual, 0.0);
      lp.add_constraint({{out.v0, 1.0}, {b.v3_star(), -1.0}}, Relation::LessEqual, 0.0);
      if (opt.also_win) add_winning_rows(lp, b);
      lp.set_objective(Sense::Maximize, {{out.v0, 1.0}});
      break;
    case Objective::Custom:
      add_winning_rows(lp, b);
      if (opt.custom.sense == Sense::Feasibility) throw std::invalid_argument("custom objective needs a direction");
      lp.set_objective(opt.custom.sense, custom_terms(b, opt.custom));
      break;
  }
  return out;
}

}  // namespace

DominanceLp build_type1_lp(const PolymatrixGame& g, const Triple& t, double eps,
                           const LpOptions& opt) {
  return build_dominance(g, t, eps, opt, false);
}

DominanceLp build_type2_lp(const PolymatrixGame& g, const Triple& t, double eps,
                           const LpOptions& opt) {
  return build_dominance(g, t, eps, opt, true);
}

DominanceLp build_batch_lp(const PolymatrixGame& g, const Triple& first, const Triple& second,
                           double eps, const LpOptions& opt) {
  DominanceLp out;
  auto& lp = out.lp;
  out.blocks.push_back(add_block(lp, g, first, eps, false, opt.row_restricted, "first."));
  out.blocks.push_back(add_block(lp, g, second, eps, false, opt.row_restricted, "second."));
  const auto& b1 = out.blocks[0];
  const auto& b2 = out.blocks[1];
  const double rev = b1.revenue + b2.revenue;
  const std::vector<std::pair<Index, double>> costs = {
      {b1.d2, 1.0}, {b1.d3, 1.0}, {b2.d2, 1.0}, {b2.d3, 1.0}};

  // Summed over both phases, player 1 beats each opponent by at least eps.
  auto opponent_rows = [&](double rhs, Index v0) {
    for (auto [va, vb] : {std::pair{b1.v2_star(), b2.v2_star()}, std::pair{b1.v3_star(), b2.v3_star()}}) {
      auto terms = costs;
      terms.emplace_back(va, 1.0);
      terms.emplace_back(vb, 1.0);
      if (v0 >= 0) terms.emplace_back(v0, 1.0);
      lp.add_constraint(terms, Relation::LessEqual, rhs);
    }
  };
  opponent_rows(rev - eps, -1);

  switch (opt.objective) {
    case Objective::Feasibility:
      break;
    case Objective::MinCost:
      lp.set_objective(Sense::Minimize, costs);
      break;
    case Objective::MaxMargin:
      out.v0 = lp.add_variable(0.0, LinearProgram::kInf, "v0");
      opponent_rows(rev, out.v0);
      lp.set_objective(Sense::Maximize, {{out.v0, 1.0}});
      break;
    case Objective::Custom: {
      if (opt.custom.sense == Sense::Feasibility) throw std::invalid_argument("custom objective needs a direction");
      auto terms = custom_terms(b1, opt.custom);
      auto more = custom_terms(b2, opt.custom);
      terms.insert(terms.end(), more.begin(), more.end());
      lp.set_objective(opt.custom.sense, terms);
      break;
    }
    case Objective::MinInefficiency:
    case Objective::MaxEgalitarian:
      throw std::invalid_argument(std::string("objective ") + to_string(opt.objective) +
                                  " applies to dominance solvable policies only");
  }
  return out;
}

CompleteStrategy extract_strategy(const PolymatrixGame& g, const DominanceBlock& block,
                                  const VectorXd& point) {
  CompleteStrategy s{block.triple.i, g.A21(), g.A31()};
  for (Index i = 0; i < g.n(); ++i) {
    for (Index j = 0; j < g.m(); ++j) {
      if (block.a21(i, j) >= 0) s.A21(i, j) = point(block.a21(i, j));
    }
    for (Index k = 0; k < g.l(); ++k) {
      if (block.a31(i, k) >= 0) s.A31(i, k) = point(block.a31(i, k));
    }
  }
  return s;
}

void recompute_phase_values(const PolymatrixGame& g, PolicyCertificate& cert) {
  const double k_min = min_revenue(g);
  double cost = 0, rev = 0, rev_over_k = 0;
  for (auto& p : cert.phases) {
    const auto eff = g.with_manipulation(p.strategy.A21, p.strategy.A31);
    const ActionProfile prof{p.triple.i, p.triple.j, p.triple.k};
    p.cost = manipulation_cost(p.strategy.A21, p.strategy.A31, g);
    p.v1 = realized_utility(eff, prof, Player::One, p.cost);
    p.v2 = realized_utility(eff, prof, Player::Two);
    p.v3 = realized_utility(eff, prof, Player::Three);
    const double r = g.A12()(p.triple.i, p.triple.j) + g.A13()(p.triple.i, p.triple.k);
    cost += p.cost;
    rev += r;
    rev_over_k += r - k_min;
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  cert.inefficiency_ratio = rev_over_k > 0 ? cost / rev_over_k : inf;
  cert.inefficiency_ratio_revenue = rev > 0 ? cost / rev : inf;
}

namespace {

struct Candidate {
  Triple first, second;
  LpStatus status = LpStatus::Infeasible;
  double objective = 0;
  VectorXd point;
  std::string error;
};

std::string triple_label(const Triple& t) {
  return "(" + std::to_string(t.i) + "," + std::to_string(t.j) + "," + std::to_string(t.k) + ")";
}

bool maximizing(const SynthesisRequest& r) {
  switch (r.objective) {
    case Objective::MaxMargin:
    case Objective::MaxEgalitarian:
      return true;
    case Objective::Custom:
      return r.custom.sense == Sense::Maximize;
    default:
      return false;
  }
}

}  // namespace

SynthesisResult synthesize(const SynthesisRequest& req) {
  const auto& g = req.game;
  if (!(req.eps > 0) || !std::isfinite(req.eps)) throw std::invalid_argument("eps must be positive");
  const bool batch = req.policy_class == PolicyClass::Batch;
  if (batch && (req.objective == Objective::MinInefficiency ||
                req.objective == Objective::MaxEgalitarian)) {
    throw std::invalid_argument(std::string("objective ") + to_string(req.objective) +
                                " applies to dominance solvable policies only");
  }
  if (req.objective == Objective::Custom) {
    const auto& c = req.custom;
    if (!std::isfinite(c.d2) || !std::isfinite(c.d3) || !std::isfinite(c.v2) || !std::isfinite(c.v3)) {
      throw std::invalid_argument("custom objective must be finite");
    }
  }
  LpOptions opt{req.objective, req.custom, req.row_restricted, req.also_win};

  std::vector<Triple> triples;
  for (Index i = 0; i < g.n(); ++i)
    for (Index j = 0; j < g.m(); ++j)
      for (Index k = 0; k < g.l(); ++k) triples.push_back({i, j, k});
  const Index nt = static_cast<Index>(triples.size());
  const Index total = batch ? nt * nt : nt;

  auto evaluate = [&](Index idx, Candidate& c) {
    c.first = triples[batch ? idx / nt : idx];
    c.second = batch ? triples[idx % nt] : c.first;
    try {
      DominanceLp built = batch ? build_batch_lp(g, c.first, c.second, req.eps, opt)
                        : req.policy_class == PolicyClass::Type2
                            ? build_type2_lp(g, c.first, req.eps, opt)
                            : build_type1_lp(g, c.first, req.eps, opt);
      auto sol = solve(built.lp, req.simplex);
      c.status = sol.status;
      c.objective = sol.objective_value;
      c.point = std::move(sol.point);
    } catch (const DegenerateLpError& e) {
      c.error = e.what();
    }
  };

  SynthesisResult result;
  result.lp_count = 0;
  const bool maximize = maximizing(req);
  const double k_min = min_revenue(g);
  constexpr double kTieTol = 1e-9;
  std::optional<double> best_score;

  auto score_of = [&](const Candidate& c) {
    if (req.objective == Objective::MinInefficiency) {
      const double denom = g.A12()(c.first.i, c.first.j) + g.A13()(c.first.i, c.first.k) - k_min;
      if (denom > 0) return c.objective / denom;
      return std::numeric_limits<double>::infinity();
    }
    return maximize ? -c.objective : c.objective;  // smaller is better
  };

  auto make_certificate = [&](const Candidate& c) {
    PolicyCertificate cert;
    cert.policy_class = req.policy_class;
    cert.objective = req.objective;
    cert.eps = req.eps;
    cert.requires_win = req.objective != Objective::MaxEgalitarian || req.also_win;
    // Rebuild the index map (cheap) to reassemble the matrices.
    DominanceLp built = batch ? build_batch_lp(g, c.first, c.second, req.eps, opt)
                      : req.policy_class == PolicyClass::Type2
                          ? build_type2_lp(g, c.first, req.eps, opt)
                          : build_type1_lp(g, c.first, req.eps, opt);
    for (const auto& b : built.blocks) {
      PhaseCertificate ph;
      ph.triple = b.triple;
      ph.strategy = extract_strategy(g, b, c.point);
      cert.phases.push_back(std::move(ph));
    }
    cert.objective_value = c.objective;
    recompute_phase_values(g, cert);
    if (req.objective == Objective::MinInefficiency) cert.objective_value = cert.inefficiency_ratio;
    cert.verification = verify_certificate(g, cert, req.verify_tolerance);
    return cert;
  };

  const int threads = std::max(1, req.threads);
  const Index chunk = 2048;
  std::vector<Candidate> buf;
  for (Index start = 0; start < total; start += chunk) {
    const Index count = std::min(chunk, total - start);
    buf.assign(static_cast<std::size_t>(count), Candidate{});
    if (threads == 1 || count < 2) {
      for (Index q = 0; q < count; ++q) evaluate(start + q, buf[q]);
    } else {
      std::atomic<Index> next{0};
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
          for (Index q = next++; q < count; q = next++) evaluate(start + q, buf[q]);
        });
      }
      for (auto& th : pool) th.join();
    }
    result.lp_count += count;

    bool stop = false;
    for (auto& c : buf) {
      const std::string label =
          batch ? triple_label(c.first) + "+" + triple_label(c.second) : triple_label(c.first);
      if (!c.error.empty()) {
        result.warnings.push_back("triple " + label + " skipped: " + c.error);
        continue;
      }
      if (c.status == LpStatus::Unbounded) {
        result.warnings.push_back("triple " + label + " skipped: objective unbounded");
        continue;
      }
      if (c.status == LpStatus::Infeasible) continue;
      ++result.feasible_count;
      const double score = score_of(c);
      if (best_score && !(score < *best_score - kTieTol)) continue;
      PolicyCertificate cert = make_certificate(c);
      if (!cert.verification.passed()) {
        result.warnings.push_back("triple " + label + " rejected: LP point failed verification");
        continue;
      }
      best_score = score;
      result.certificate = std::move(cert);
      if (req.objective == Objective::Feasibility) {
        stop = true;
        break;
      }
    }
    if (stop) break;
  }
  return result;
}

SynthesisResult synthesize_max_margin(const PolymatrixGame& g, PolicyClass cls, double eps) {
  SynthesisRequest r{g};
  r.policy_class = cls;
  r.objective = Objective::MaxMargin;
  r.eps = eps;
  return synthesize(r);
}

SynthesisResult synthesize_min_inefficiency(const PolymatrixGame& g, double eps, PolicyClass cls) {
  SynthesisRequest r{g};
  r.policy_class = cls;
  r.objective = Objective::MinInefficiency;
  r.eps = eps;
  return synthesize(r);
}

SynthesisResult synthesize_max_egalitarian(const PolymatrixGame& g, double eps, PolicyClass cls,
                                           bool also_win) {
  SynthesisRequest r{g};
  r.policy_class = cls;
  r.objective = Objective::MaxEgalitarian;
  r.eps = eps;
  r.also_win = also_win;
  return synthesize(r);
}

}  // namespace polymanip
