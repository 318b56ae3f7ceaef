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

// Policy synthesis: for every candidate target triple (i*, j*, k*) compile the
// dominance and winning conditions into an LP over the manipulated entries of
// A21 and A31, solve it, and keep the best certified result.

#ifndef POLYMANIP_SYNTH_HPP
#define POLYMANIP_SYNTH_HPP

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "polymanip/linsolve.hpp"
#include "polymanip/polymatrix.hpp"

namespace polymanip {

enum class PolicyClass { Type1, Type2, Batch };

enum class Objective {
  Feasibility,
  MaxMargin,
  MinInefficiency,
  MaxEgalitarian,
  MinCost,
  Custom,
};

const char* to_string(PolicyClass c);
const char* to_string(Objective o);
PolicyClass parse_policy_class(const std::string& s);  // "type1" | "type2" | "batch"
Objective parse_objective(const std::string& s);       // "min-cost", "max-margin", ...

struct Triple {
  Index i = 0, j = 0, k = 0;
  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Linear form c_d2 d2 + c_d3 d3 + c_v2 v2* + c_v3 v3*, where v2* and v3* are
// the opponents' utilities at the target profile.
struct CustomObjective {
  Sense sense = Sense::Minimize;
  double d2 = 0, d3 = 0, v2 = 0, v3 = 0;
};

// A constant complete strategy, or two of them switched after round
// ceil(T/2).
class ManipulatorPolicy {
 public:
  static ManipulatorPolicy constant(CompleteStrategy s);
  static ManipulatorPolicy batch(CompleteStrategy first, CompleteStrategy second);

  bool is_batch() const { return second_.has_value(); }
  const CompleteStrategy& first() const { return first_; }
  const CompleteStrategy& second() const { return is_batch() ? *second_ : first_; }

  // Strategy in effect at round t (1-based) of a T-round game.
  const CompleteStrategy& at_round(Index t, Index horizon) const;

  // Throws DimensionError / std::out_of_range if the policy does not fit `g`.
  void validate(const PolymatrixGame& g) const;

 private:
  explicit ManipulatorPolicy(CompleteStrategy first) : first_(std::move(first)) {}
  CompleteStrategy first_;
  std::optional<CompleteStrategy> second_;
};

struct CheckResult {
  std::string name;
  bool satisfied = false;
  double slack = 0;            // achieved value minus required value
  bool informational = false;  // listed but not part of the class conditions
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  Index violations() const;
  bool passed() const { return violations() == 0; }
  // Smallest slack over the non-informational checks.
  double min_slack() const;
};

// One phase of a certified policy: the target profile, the complete strategy
// and what it yields at that profile.
struct PhaseCertificate {
  Triple triple;
  CompleteStrategy strategy;
  double cost = 0;
  double v1 = 0, v2 = 0, v3 = 0;  // single-shot utilities at the target, v1 net of cost
};

struct PolicyCertificate {
  PolicyClass policy_class = PolicyClass::Type1;
  Objective objective = Objective::Feasibility;
  double eps = 0.1;
  bool requires_win = true;
  std::vector<PhaseCertificate> phases;  // one, or two for batch
  double objective_value = 0;
  // Cost over (revenue - K), K the smallest revenue over all profiles, and
  // cost over revenue. Infinite when the denominator is not positive.
  double inefficiency_ratio = 0;
  double inefficiency_ratio_revenue = 0;
  VerificationReport verification;

  ManipulatorPolicy policy() const;
  double cost() const;    // summed over phases
  double margin() const;  // min(v1 - v2, v1 - v3), summed over phases for batch
};

struct SynthesisRequest {
  PolymatrixGame game;
  PolicyClass policy_class = PolicyClass::Type1;
  Objective objective = Objective::Feasibility;
  double eps = 0.1;
  bool row_restricted = true;
  bool also_win = false;  // re-add the winning rows to the egalitarian LP
  CustomObjective custom;
  int threads = 1;
  double verify_tolerance = 1e-7;
  SimplexOptions simplex;
};

struct SynthesisResult {
  std::optional<PolicyCertificate> certificate;
  std::vector<std::string> warnings;
  Index lp_count = 0;
  Index feasible_count = 0;
};

// Variable indices of one dominance block inside an LP. Entries of a21/a31
// are -1 where the entry is held at its base value.
struct DominanceBlock {
  Triple triple;
  Index d2 = -1, d3 = -1;
  std::vector<Index> v2;  // one per player-3 action
  std::vector<Index> v3;  // one per player-2 action (type 1) or a single scalar (type 2)
  Matrix<Index> a21, a31;
  double revenue = 0;  // A12(i*, j*) + A13(i*, k*)

  Index v2_star() const { return v2[static_cast<std::size_t>(triple.k)]; }
  Index v3_star() const {
    return v3.size() == 1 ? v3[0] : v3[static_cast<std::size_t>(triple.j)];
  }
};

struct DominanceLp {
  LinearProgram lp;
  std::vector<DominanceBlock> blocks;
  Index v0 = -1;
};

struct LpOptions {
  Objective objective = Objective::Feasibility;
  CustomObjective custom;
  bool row_restricted = true;
  bool also_win = false;
};

DominanceLp build_type1_lp(const PolymatrixGame& g, const Triple& t, double eps,
                           const LpOptions& opt = {});
DominanceLp build_type2_lp(const PolymatrixGame& g, const Triple& t, double eps,
                           const LpOptions& opt = {});
DominanceLp build_batch_lp(const PolymatrixGame& g, const Triple& first, const Triple& second,
                           double eps, const LpOptions& opt = {});

// Reassembles the manipulated matrices of `block` from an LP point.
CompleteStrategy extract_strategy(const PolymatrixGame& g, const DominanceBlock& block,
                                  const VectorXd& point);

SynthesisResult synthesize(const SynthesisRequest& request);

SynthesisResult synthesize_max_margin(const PolymatrixGame& g, PolicyClass cls, double eps);
SynthesisResult synthesize_min_inefficiency(const PolymatrixGame& g, double eps,
                                            PolicyClass cls = PolicyClass::Type1);
SynthesisResult synthesize_max_egalitarian(const PolymatrixGame& g, double eps,
                                           PolicyClass cls = PolicyClass::Type1,
                                           bool also_win = false);

// Smallest A12(i, j) + A13(i, k) over all profiles.
double min_revenue(const PolymatrixGame& g);

// Fills phase utilities and costs from the matrices and recomputes the
// inefficiency ratios; used for certificates built outside the synthesizer.
void recompute_phase_values(const PolymatrixGame& g, PolicyCertificate& cert);

// Re-derives the class conditions by enumeration, independent of any LP.
// A dominance gap passes when gap >= eps - tolerance; winning inequalities
// pass when they hold within `tolerance`.
VerificationReport verify_certificate(const PolymatrixGame& g, const PolicyCertificate& cert,
                                      double tolerance = 1e-7);

}  // namespace polymanip

#endif  // POLYMANIP_SYNTH_HPP
