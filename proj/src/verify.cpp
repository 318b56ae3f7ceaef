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

#include <cmath>
#include <string>

#include "polymanip/dominance.hpp"
#include "polymanip/synth.hpp"

namespace polymanip {

namespace {

std::string idx(Index v) { return std::to_string(v); }

}  // namespace

VerificationReport verify_certificate(const PolymatrixGame& g, const PolicyCertificate& cert,
                                      double tol) {
  VerificationReport rep;
  auto add = [&](std::string name, double slack, bool informational = false) {
    rep.checks.push_back({std::move(name), slack >= -tol, slack, informational});
  };
  const double eps = cert.eps;

  if (cert.phases.empty() || (cert.policy_class == PolicyClass::Batch) != (cert.phases.size() == 2) ||
      cert.phases.size() > 2) {
    rep.checks.push_back({"phase count matches the policy class", false, -1.0, false});
    return rep;
  }

  double s1 = 0, s2 = 0, s3 = 0;
  for (std::size_t p = 0; p < cert.phases.size(); ++p) {
    const auto& ph = cert.phases[p];
    const std::string pre = cert.phases.size() > 1 ? "phase " + std::to_string(p + 1) + ": " : "";
    const Triple& t = ph.triple;
    if (t.i < 0 || t.i >= g.n() || t.j < 0 || t.j >= g.m() || t.k < 0 || t.k >= g.l()) {
      rep.checks.push_back({pre + "target triple in range", false, -1.0, false});
      continue;
    }
    try {
      PolymatrixGame::expect_shape("A21", ph.strategy.A21, g.n(), g.m());
      PolymatrixGame::expect_shape("A31", ph.strategy.A31, g.n(), g.l());
    } catch (const DimensionError& e) {
      rep.checks.push_back({pre + "matrix shape " + e.what(), false, -1.0, false});
      continue;
    }
    rep.checks.push_back({pre + "manipulator plays i*=" + idx(t.i), ph.strategy.action == t.i,
                          ph.strategy.action == t.i ? 0.0 : -1.0, false});

    const auto eff = g.with_manipulation(ph.strategy.A21, ph.strategy.A31);
    for_each_type1_gap(eff, t.i, t.j, Player::Two, [&](Index k, Index j, double gap) {
      add(pre + "player 2: j*=" + idx(t.j) + " beats j=" + idx(j) + " at k=" + idx(k) + " by eps",
          gap - eps);
    });
    if (cert.policy_class == PolicyClass::Type2) {
      for_each_type2_gap(eff, t.i, t.j, t.k, [&](Index k, double gap) {
        add(pre + "player 3: k*=" + idx(t.k) + " beats k=" + idx(k) + " at j*=" + idx(t.j) +
                " by eps",
            gap - eps);
      });
    } else {
      for_each_type1_gap(eff, t.i, t.k, Player::Three, [&](Index j, Index k, double gap) {
        add(pre + "player 3: k*=" + idx(t.k) + " beats k=" + idx(k) + " at j=" + idx(j) +
                " by eps",
            gap - eps);
      });
    }

    const ActionProfile prof{t.i, t.j, t.k};
    const double cost = manipulation_cost(ph.strategy.A21, ph.strategy.A31, g);
    const double v1 = realized_utility(eff, prof, Player::One, cost);
    const double v2 = realized_utility(eff, prof, Player::Two);
    const double v3 = realized_utility(eff, prof, Player::Three);
    add(pre + "reported cost matches the matrices", -std::abs(cost - ph.cost));
    add(pre + "reported utilities match the matrices",
        -std::max({std::abs(v1 - ph.v1), std::abs(v2 - ph.v2), std::abs(v3 - ph.v3)}));
    if (cert.phases.size() == 1) {
      add("winning: v1 >= v2", v1 - v2, !cert.requires_win);
      add("winning: v1 >= v3", v1 - v3, !cert.requires_win);
    }
    s1 += v1;
    s2 += v2;
    s3 += v3;
  }
  if (cert.phases.size() == 2) {
    add("batch winning: v1 summed over phases beats v2 by eps", s1 - s2 - eps, !cert.requires_win);
    add("batch winning: v1 summed over phases beats v3 by eps", s1 - s3 - eps, !cert.requires_win);
  }
  return rep;
}

}  // namespace polymanip
