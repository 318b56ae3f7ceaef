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

// Dense linear programming: a two-phase primal simplex over an explicit
// tableau, with a small presolve that eliminates free variables through
// equality rows and keeps only the tightest of parallel inequality rows.

#ifndef POLYMANIP_LINSOLVE_HPP
#define POLYMANIP_LINSOLVE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polymanip/types.hpp"

namespace polymanip {

enum class Sense { Maximize, Minimize, Feasibility };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class LpStatus { Optimal, Feasible, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Feasible: return "feasible";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

// Thrown when the simplex cannot make reliable progress (iteration cap hit or
// the recovered point fails the final constraint check).
class DegenerateLpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
struct LpConstraint {
  Vector<Scalar> coeffs;
  Relation relation = Relation::LessEqual;
  Scalar rhs = Scalar(0);
};

template <typename Scalar>
class BasicLinearProgram {
 public:
  static constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

  Index num_variables() const { return static_cast<Index>(lower_.size()); }
  Index num_constraints() const { return static_cast<Index>(constraints_.size()); }

  // Adds a variable and returns its index. Existing rows get a zero
  // coefficient for it.
  Index add_variable(Scalar lower = Scalar(0), Scalar upper = kInf, std::string name = {}) {
    if (std::isnan(lower) || std::isnan(upper) || lower > upper || lower == kInf ||
        upper == -kInf) {
      throw std::invalid_argument("invalid variable bounds");
    }
    const Index idx = num_variables();
    lower_.push_back(lower);
    upper_.push_back(upper);
    names_.push_back(name.empty() ? "x" + std::to_string(idx) : std::move(name));
    objective_.conservativeResize(idx + 1);
    objective_(idx) = Scalar(0);
    for (auto& c : constraints_) {
      c.coeffs.conservativeResize(idx + 1);
      c.coeffs(idx) = Scalar(0);
    }
    return idx;
  }

  Index add_free_variable(std::string name = {}) {
    return add_variable(-kInf, kInf, std::move(name));
  }

  template <class Derived>
  void add_constraint(const Eigen::MatrixBase<Derived>& dense, Relation rel, Scalar rhs) {
    Vector<Scalar> coeffs = dense;
    if (coeffs.size() != num_variables()) {
      throw std::invalid_argument("constraint width does not match the variable count");
    }
    if (!coeffs.allFinite() || !std::isfinite(rhs)) {
      throw std::invalid_argument("constraint entries must be finite");
    }
    constraints_.push_back({std::move(coeffs), rel, rhs});
  }

  // Sparse convenience form: a list of (variable, coefficient) terms.
  // Repeated variables accumulate.
  void add_constraint(const std::vector<std::pair<Index, Scalar>>& terms, Relation rel,
                      Scalar rhs) {
    Vector<Scalar> row = Vector<Scalar>::Zero(num_variables());
    for (const auto& [var, coef] : terms) {
      if (var < 0 || var >= num_variables()) throw std::out_of_range("unknown variable");
      row(var) += coef;
    }
    add_constraint(row, rel, rhs);
  }

  template <class Derived>
  void set_objective(Sense sense, const Eigen::MatrixBase<Derived>& dense) {
    Vector<Scalar> coeffs = dense;
    if (coeffs.size() != num_variables()) {
      throw std::invalid_argument("objective width does not match the variable count");
    }
    if (!coeffs.allFinite()) throw std::invalid_argument("objective must be finite");
    if (sense == Sense::Feasibility && !coeffs.isZero(0)) {
      throw std::invalid_argument("feasibility problems carry a zero objective");
    }
    sense_ = sense;
    objective_ = std::move(coeffs);
  }

  void set_objective(Sense sense, const std::vector<std::pair<Index, Scalar>>& terms) {
    Vector<Scalar> c = Vector<Scalar>::Zero(num_variables());
    for (const auto& [var, coef] : terms) {
      if (var < 0 || var >= num_variables()) throw std::out_of_range("unknown variable");
      c(var) += coef;
    }
    set_objective(sense, c);
  }

  Sense sense() const { return sense_; }
  const Vector<Scalar>& objective() const { return objective_; }
  const std::vector<LpConstraint<Scalar>>& constraints() const { return constraints_; }
  Scalar lower(Index j) const { return lower_[j]; }
  Scalar upper(Index j) const { return upper_[j]; }
  const std::string& name(Index j) const { return names_[j]; }

  // Largest violation of any row or bound at `x`.
  Scalar max_violation(const Vector<Scalar>& x) const {
    Scalar worst = Scalar(0);
    for (const auto& c : constraints_) {
      const Scalar lhs = c.coeffs.dot(x);
      Scalar v = Scalar(0);
      switch (c.relation) {
        case Relation::LessEqual: v = lhs - c.rhs; break;
        case Relation::GreaterEqual: v = c.rhs - lhs; break;
        case Relation::Equal: v = std::abs(lhs - c.rhs); break;
      }
      worst = std::max(worst, v);
    }
    for (Index j = 0; j < num_variables(); ++j) {
      worst = std::max({worst, lower_[j] - x(j), x(j) - upper_[j]});
    }
    return worst;
  }

 private:
  Sense sense_ = Sense::Feasibility;
  Vector<Scalar> objective_;
  std::vector<LpConstraint<Scalar>> constraints_;
  std::vector<Scalar> lower_, upper_;
  std::vector<std::string> names_;
};

using LinearProgram = BasicLinearProgram<double>;

template <typename Scalar>
struct BasicLpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector<Scalar> point;  // empty unless optimal or feasible
  Scalar objective_value = Scalar(0);
  Index iterations = 0;
};

using LpSolution = BasicLpSolution<double>;

struct SimplexOptions {
  double feasibility_tol = 1e-7;
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  // Dantzig pricing gives way to Bland's rule after this many multiples of
  // (rows + cols) iterations; the hard cap raises DegenerateLpError.
  int bland_after = 3;
  int iteration_cap = 50;
  bool presolve = true;
};

namespace detail {

template <typename Scalar>
class Tableau {
 public:
  // Rows 0..m-1 are constraints, row m is the reduced-cost row; the last
  // column is the right-hand side.
  Matrix<Scalar> t;
  std::vector<Index> basis;
  Index cols = 0;  // number of variable columns (excluding rhs)

  Index rows() const { return t.rows() - 1; }
  Scalar& rhs(Index r) { return t(r, cols); }

  void pivot(Index r, Index c) {
    const Scalar piv = t(r, c);
    t.row(r) /= piv;
    t(r, c) = Scalar(1);
    Vector<Scalar> col = t.col(c);
    col(r) = Scalar(0);
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> prow = t.row(r);
    t.noalias() -= col * prow;
    for (Index i = 0; i < t.rows(); ++i) {
      if (i != r) t(i, c) = Scalar(0);
    }
    basis[r] = c;
  }

  void drop_row(Index r) {
    const Index last = t.rows() - 1;
    Matrix<Scalar> next(t.rows() - 1, t.cols());
    next.topRows(r) = t.topRows(r);
    next.bottomRows(last - r) = t.bottomRows(last - r);
    t.swap(next);
    basis.erase(basis.begin() + r);
  }
};

// Runs primal simplex on the tableau maximizing the objective encoded in the
// last row. `allowed` marks columns permitted to enter. Returns false when the
// problem is unbounded along some entering column.
template <typename Scalar>
bool run_simplex(Tableau<Scalar>& tab, const std::vector<char>& allowed,
                 const SimplexOptions& opt, Index& iterations) {
  const Index m = tab.rows();
  const Index bland_start = static_cast<Index>(opt.bland_after) * (m + tab.cols);
  const Index cap = static_cast<Index>(opt.iteration_cap) * (m + tab.cols) + 1000;
  Index local = 0;
  for (;;) {
    const bool bland = local >= bland_start;
    Index enter = -1;
    Scalar best = static_cast<Scalar>(opt.optimality_tol);
    for (Index j = 0; j < tab.cols; ++j) {
      if (!allowed[j]) continue;
      const Scalar d = tab.t(m, j);
      if (d > best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) return true;
    if (++local > cap) throw DegenerateLpError("simplex iteration cap reached");
    ++iterations;

    Index leave = -1;
    Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
    for (Index i = 0; i < m; ++i) {
      const Scalar a = tab.t(i, enter);
      if (a <= static_cast<Scalar>(opt.pivot_tol)) continue;
      const Scalar ratio = std::max(tab.rhs(i), Scalar(0)) / a;
      const Scalar tie = Scalar(1e-12) * std::max(Scalar(1), std::abs(best_ratio));
      if (leave < 0 || ratio < best_ratio - tie) {
        best_ratio = ratio;
        leave = i;
      } else if (ratio <= best_ratio + tie && tab.basis[i] < tab.basis[leave]) {
        best_ratio = std::min(best_ratio, ratio);
        leave = i;
      }
    }
    if (leave < 0) return false;
    tab.pivot(leave, enter);
  }
}

// Working copy of the problem used by presolve; every row is kept in dense
// form and the objective is stored for maximization.
template <typename Scalar>
struct Reduced {
  Matrix<Scalar> a;
  std::vector<Relation> rel;
  Vector<Scalar> b;
  Vector<Scalar> c;
  std::vector<Scalar> lo, up;
  std::vector<char> eliminated;

  struct Elimination {
    Index var;
    Vector<Scalar> row;  // a . x = rhs at the time of elimination
    Scalar rhs;
  };
  std::vector<Elimination> eliminations;

  void remove_rows(const std::vector<char>& keep) {
    Index kept = 0;
    for (char k : keep) kept += k ? 1 : 0;
    Matrix<Scalar> na(kept, a.cols());
    Vector<Scalar> nb(kept);
    std::vector<Relation> nrel;
    nrel.reserve(kept);
    Index r = 0;
    for (Index i = 0; i < a.rows(); ++i) {
      if (!keep[i]) continue;
      na.row(r) = a.row(i);
      nb(r) = b(i);
      nrel.push_back(rel[i]);
      ++r;
    }
    a.swap(na);
    b.swap(nb);
    rel.swap(nrel);
  }
};

template <typename Scalar>
bool is_free(const Reduced<Scalar>& p, Index j) {
  return p.lo[j] == -std::numeric_limits<Scalar>::infinity() &&
         p.up[j] == std::numeric_limits<Scalar>::infinity();
}

// Substitutes free variables out through equality rows. Returns false if an
// emptied row turns out to be violated.
template <typename Scalar>
bool eliminate_free_variables(Reduced<Scalar>& p, const SimplexOptions& opt) {
  for (;;) {
    Index row = -1, var = -1;
    for (Index i = 0; i < p.a.rows() && row < 0; ++i) {
      if (p.rel[i] != Relation::Equal) continue;
      Scalar best = static_cast<Scalar>(opt.pivot_tol);
      for (Index j = 0; j < p.a.cols(); ++j) {
        if (p.eliminated[j] || !is_free(p, j)) continue;
        if (std::abs(p.a(i, j)) > best) {
          best = std::abs(p.a(i, j));
          row = i;
          var = j;
        }
      }
    }
    if (row < 0) break;
    const Vector<Scalar> r = p.a.row(row).transpose();
    const Scalar rb = p.b(row);
    const Scalar pv = r(var);
    for (Index i = 0; i < p.a.rows(); ++i) {
      if (i == row || p.a(i, var) == Scalar(0)) continue;
      const Scalar f = p.a(i, var) / pv;
      p.a.row(i) -= f * r.transpose();
      p.b(i) -= f * rb;
      p.a(i, var) = Scalar(0);
    }
    if (p.c(var) != Scalar(0)) {
      const Scalar f = p.c(var) / pv;
      p.c -= f * r;
      p.c(var) = Scalar(0);
    }
    p.eliminations.push_back({var, r, rb});
    p.eliminated[var] = 1;
    std::vector<char> keep(p.a.rows(), 1);
    keep[row] = 0;
    p.remove_rows(keep);
  }

  // Rows left without coefficients are either trivially true or infeasible.
  std::vector<char> keep(p.a.rows(), 1);
  for (Index i = 0; i < p.a.rows(); ++i) {
    if (p.a.row(i).cwiseAbs().maxCoeff() > Scalar(1e-12)) continue;
    const Scalar tol = static_cast<Scalar>(opt.feasibility_tol);
    const Scalar b = p.b(i);
    const bool ok = (p.rel[i] == Relation::LessEqual && b >= -tol) ||
                    (p.rel[i] == Relation::GreaterEqual && b <= tol) ||
                    (p.rel[i] == Relation::Equal && std::abs(b) <= tol);
    if (!ok) return false;
    keep[i] = 0;
  }
  p.remove_rows(keep);
  return true;
}

// Among inequality rows with proportional coefficients keep only the tightest.
template <typename Scalar>
void merge_parallel_rows(Reduced<Scalar>& p) {
  std::map<std::vector<Scalar>, Index> seen;
  std::vector<char> keep(p.a.rows(), 1);
  for (Index i = 0; i < p.a.rows(); ++i) {
    if (p.rel[i] == Relation::Equal) continue;
    if (p.rel[i] == Relation::GreaterEqual) {
      p.a.row(i) *= Scalar(-1);
      p.b(i) = -p.b(i);
      p.rel[i] = Relation::LessEqual;
    }
    const Scalar scale = p.a.row(i).cwiseAbs().maxCoeff();
    std::vector<Scalar> key(p.a.cols());
    for (Index j = 0; j < p.a.cols(); ++j) key[j] = p.a(i, j) / scale;
    auto [it, inserted] = seen.emplace(std::move(key), i);
    if (inserted) continue;
    const Index prev = it->second;
    const Scalar prev_scale = p.a.row(prev).cwiseAbs().maxCoeff();
    if (p.b(i) / scale < p.b(prev) / prev_scale) {
      keep[prev] = 0;
      it->second = i;
    } else {
      keep[i] = 0;
    }
  }
  p.remove_rows(keep);
}

}  // namespace detail

template <typename Scalar>
BasicLpSolution<Scalar> solve(const BasicLinearProgram<Scalar>& lp,
                              const SimplexOptions& opt = {}) {
  using detail::Reduced;
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  const Index nv = lp.num_variables();
  BasicLpSolution<Scalar> sol;

  Reduced<Scalar> p;
  p.a.resize(lp.num_constraints(), nv);
  p.b.resize(lp.num_constraints());
  for (Index i = 0; i < lp.num_constraints(); ++i) {
    const auto& c = lp.constraints()[i];
    p.a.row(i) = c.coeffs.transpose();
    p.b(i) = c.rhs;
    p.rel.push_back(c.relation);
  }
  switch (lp.sense()) {
    case Sense::Maximize: p.c = lp.objective(); break;
    case Sense::Minimize: p.c = -lp.objective(); break;
    case Sense::Feasibility: p.c = Vector<Scalar>::Zero(nv); break;
  }
  for (Index j = 0; j < nv; ++j) {
    p.lo.push_back(lp.lower(j));
    p.up.push_back(lp.upper(j));
  }
  p.eliminated.assign(nv, 0);

  if (opt.presolve) {
    if (!detail::eliminate_free_variables(p, opt)) return sol;  // infeasible
    detail::merge_parallel_rows(p);
  }

  // Column layout: each remaining variable maps to one column (shifted or
  // mirrored bound) or two (free split).
  struct ColMap {
    Index var;
    Scalar sign;
  };
  std::vector<ColMap> cols;
  Vector<Scalar> offset = Vector<Scalar>::Zero(nv);
  std::vector<std::pair<Index, Scalar>> bound_rows;  // (column, upper - lower)
  for (Index j = 0; j < nv; ++j) {
    if (p.eliminated[j]) continue;
    if (p.lo[j] > -inf) {
      offset(j) = p.lo[j];
      if (p.up[j] < inf) bound_rows.emplace_back(static_cast<Index>(cols.size()), p.up[j] - p.lo[j]);
      cols.push_back({j, Scalar(1)});
    } else if (p.up[j] < inf) {
      offset(j) = p.up[j];
      cols.push_back({j, Scalar(-1)});
    } else {
      cols.push_back({j, Scalar(1)});
      cols.push_back({j, Scalar(-1)});
    }
  }
  const Index ns = static_cast<Index>(cols.size());
  const Index mr = p.a.rows() + static_cast<Index>(bound_rows.size());

  Matrix<Scalar> a = Matrix<Scalar>::Zero(mr, ns);
  Vector<Scalar> b(mr);
  std::vector<Relation> rel(mr);
  for (Index i = 0; i < p.a.rows(); ++i) {
    for (Index c = 0; c < ns; ++c) a(i, c) = p.a(i, cols[c].var) * cols[c].sign;
    b(i) = p.b(i) - p.a.row(i).dot(offset);
    rel[i] = p.rel[i];
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    const Index i = p.a.rows() + static_cast<Index>(k);
    a(i, bound_rows[k].first) = Scalar(1);
    b(i) = bound_rows[k].second;
    rel[i] = Relation::LessEqual;
  }
  for (Index i = 0; i < mr; ++i) {
    if (b(i) < Scalar(0)) {
      a.row(i) *= Scalar(-1);
      b(i) = -b(i);
      if (rel[i] == Relation::LessEqual) rel[i] = Relation::GreaterEqual;
      else if (rel[i] == Relation::GreaterEqual) rel[i] = Relation::LessEqual;
    }
  }

  Index n_slack = 0, n_art = 0;
  for (Index i = 0; i < mr; ++i) {
    if (rel[i] != Relation::Equal) ++n_slack;
    if (rel[i] != Relation::LessEqual) ++n_art;
  }
  const Index total = ns + n_slack + n_art;
  detail::Tableau<Scalar> tab;
  tab.cols = total;
  tab.t = Matrix<Scalar>::Zero(mr + 1, total + 1);
  tab.basis.assign(mr, -1);
  std::vector<char> is_art(total, 0);
  Index next_slack = ns, next_art = ns + n_slack;
  for (Index i = 0; i < mr; ++i) {
    tab.t.row(i).head(ns) = a.row(i);
    tab.t(i, total) = b(i);
    if (rel[i] == Relation::LessEqual) {
      tab.t(i, next_slack) = Scalar(1);
      tab.basis[i] = next_slack++;
    } else {
      if (rel[i] == Relation::GreaterEqual) tab.t(i, next_slack++) = Scalar(-1);
      tab.t(i, next_art) = Scalar(1);
      is_art[next_art] = 1;
      tab.basis[i] = next_art++;
    }
  }

  // Phase 1: maximize -(sum of artificials).
  if (n_art > 0) {
    for (Index i = 0; i < mr; ++i) {
      if (!is_art[tab.basis[i]]) continue;
      tab.t.row(mr) += tab.t.row(i);
    }
    for (Index j = 0; j < total; ++j) {
      if (is_art[j]) tab.t(mr, j) = Scalar(0);
    }
    std::vector<char> allowed(total, 1);
    for (Index j = 0; j < total; ++j) {
      if (is_art[j]) allowed[j] = 0;
    }
    detail::run_simplex(tab, allowed, opt, sol.iterations);
    if (tab.t(mr, total) > static_cast<Scalar>(opt.feasibility_tol)) return sol;  // infeasible

    // Drive remaining artificials out of the basis; rows where that is
    // impossible are redundant.
    for (Index i = tab.rows() - 1; i >= 0; --i) {
      if (!is_art[tab.basis[i]]) continue;
      Index best = -1;
      Scalar best_abs = static_cast<Scalar>(opt.pivot_tol);
      for (Index j = 0; j < total; ++j) {
        if (is_art[j]) continue;
        if (std::abs(tab.t(i, j)) > best_abs) {
          best_abs = std::abs(tab.t(i, j));
          best = j;
        }
      }
      if (best >= 0) {
        tab.pivot(i, best);
      } else {
        tab.drop_row(i);
      }
    }
  }

  const Index m = tab.rows();
  if (lp.sense() == Sense::Feasibility) {
    sol.status = LpStatus::Feasible;
  } else {
    // Phase 2 reduced costs for the structural objective.
    Vector<Scalar> cost = Vector<Scalar>::Zero(total);
    for (Index c = 0; c < ns; ++c) cost(c) = p.c(cols[c].var) * cols[c].sign;
    tab.t.row(m).setZero();
    tab.t.row(m).head(total) = cost.transpose();
    for (Index i = 0; i < m; ++i) {
      const Scalar cb = cost(tab.basis[i]);
      if (cb != Scalar(0)) tab.t.row(m) -= cb * tab.t.row(i);
    }
    std::vector<char> allowed(total, 1);
    for (Index j = 0; j < total; ++j) {
      if (is_art[j]) allowed[j] = 0;
    }
    if (!detail::run_simplex(tab, allowed, opt, sol.iterations)) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }
    sol.status = LpStatus::Optimal;
  }

  // Recover the original point.
  Vector<Scalar> colval = Vector<Scalar>::Zero(total);
  for (Index i = 0; i < m; ++i) colval(tab.basis[i]) = std::max(tab.t(i, total), Scalar(0));
  Vector<Scalar> x = offset;
  for (Index c = 0; c < ns; ++c) x(cols[c].var) += cols[c].sign * colval(c);
  for (auto it = p.eliminations.rbegin(); it != p.eliminations.rend(); ++it) {
    const Scalar pv = it->row(it->var);
    x(it->var) = Scalar(0);
    x(it->var) = (it->rhs - it->row.dot(x)) / pv;
  }

  const Scalar viol = lp.max_violation(x);
  if (!(viol <= static_cast<Scalar>(opt.feasibility_tol))) {
    throw DegenerateLpError("recovered point violates a constraint by " + std::to_string(viol));
  }
  sol.point = std::move(x);
  sol.objective_value = lp.objective().dot(sol.point);
  return sol;
}

// Plain-text dump of an LP, one row per line, for debugging.
template <typename Scalar>
void write_lp_text(std::ostream& os, const BasicLinearProgram<Scalar>& lp) {
  auto term_list = [&](const Vector<Scalar>& v) {
    bool first = true;
    for (Index j = 0; j < v.size(); ++j) {
      if (v(j) == Scalar(0)) continue;
      os << (first ? "" : " ") << (v(j) < 0 ? "- " : (first ? "" : "+ ")) << std::abs(v(j))
         << " " << lp.name(j);
      first = false;
    }
    if (first) os << "0";
  };
  switch (lp.sense()) {
    case Sense::Maximize: os << "maximize "; break;
    case Sense::Minimize: os << "minimize "; break;
    case Sense::Feasibility: os << "feasibility "; break;
  }
  term_list(lp.objective());
  os << "\nsubject to\n";
  for (const auto& c : lp.constraints()) {
    os << "  ";
    term_list(c.coeffs);
    switch (c.relation) {
      case Relation::LessEqual: os << " <= "; break;
      case Relation::Equal: os << " = "; break;
      case Relation::GreaterEqual: os << " >= "; break;
    }
    os << c.rhs << "\n";
  }
  os << "bounds\n";
  for (Index j = 0; j < lp.num_variables(); ++j) {
    os << "  " << lp.lower(j) << " <= " << lp.name(j) << " <= " << lp.upper(j) << "\n";
  }
}

}  // namespace polymanip

#endif  // POLYMANIP_LINSOLVE_HPP
