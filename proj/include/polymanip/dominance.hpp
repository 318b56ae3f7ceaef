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

// Exhaustive checks that an opponent's target action strictly dominates its
// alternatives once the manipulator has fixed a pure action. All comparisons
// are exact: a gap passes when gap >= slack, with no hidden tolerance.

#ifndef POLYMANIP_DOMINANCE_HPP
#define POLYMANIP_DOMINANCE_HPP

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "polymanip/polymatrix.hpp"

namespace polymanip {

// Calls visit(opposing, alternative, gap) for every opposing action of the
// third player and every alternative action of `player`, where
// gap = u(target) - u(alternative) with player 1 on `i_star`.
template <typename Scalar, typename Visit>
void for_each_type1_gap(const BasicPolymatrixGame<Scalar>& g, Index i_star, Index target,
                        Player player, Visit&& visit) {
  if (i_star < 0 || i_star >= g.n()) throw std::out_of_range("manipulator action out of range");
  if (player == Player::Two) {
    if (target < 0 || target >= g.m()) throw std::out_of_range("target action out of range");
    for (Index k = 0; k < g.l(); ++k) {
      const Scalar best = g.A21()(i_star, target) + g.A23()(target, k);
      for (Index j = 0; j < g.m(); ++j) {
        if (j == target) continue;
        visit(k, j, best - (g.A21()(i_star, j) + g.A23()(j, k)));
      }
    }
  } else if (player == Player::Three) {
    if (target < 0 || target >= g.l()) throw std::out_of_range("target action out of range");
    for (Index j = 0; j < g.m(); ++j) {
      const Scalar best = g.A31()(i_star, target) + g.A32()(j, target);
      for (Index k = 0; k < g.l(); ++k) {
        if (k == target) continue;
        visit(j, k, best - (g.A31()(i_star, k) + g.A32()(j, k)));
      }
    }
  } else {
    throw std::invalid_argument("dominance is checked for players 2 and 3 only");
  }
}

// Player 3's target compared against its alternatives with players 1 and 2
// fixed on (i_star, j_star).
template <typename Scalar, typename Visit>
void for_each_type2_gap(const BasicPolymatrixGame<Scalar>& g, Index i_star, Index j_star,
                        Index k_star, Visit&& visit) {
  if (i_star < 0 || i_star >= g.n() || j_star < 0 || j_star >= g.m() || k_star < 0 ||
      k_star >= g.l()) {
    throw std::out_of_range("triple out of range");
  }
  const Scalar best = g.A31()(i_star, k_star) + g.A32()(j_star, k_star);
  for (Index k = 0; k < g.l(); ++k) {
    if (k == k_star) continue;
    visit(k, best - (g.A31()(i_star, k) + g.A32()(j_star, k)));
  }
}

// Smallest dominance gap; +infinity when the player has a single action.
template <typename Scalar>
Scalar type1_dominance_slack(const BasicPolymatrixGame<Scalar>& g, Index i_star, Index target,
                             Player player) {
  Scalar worst = std::numeric_limits<Scalar>::infinity();
  for_each_type1_gap(g, i_star, target, player,
                     [&](Index, Index, Scalar gap) { worst = std::min(worst, gap); });
  return worst;
}

template <typename Scalar>
Scalar type2_dominance_slack(const BasicPolymatrixGame<Scalar>& g, Index i_star, Index j_star,
                             Index k_star) {
  Scalar worst = std::numeric_limits<Scalar>::infinity();
  for_each_type2_gap(g, i_star, j_star, k_star,
                     [&](Index, Scalar gap) { worst = std::min(worst, gap); });
  return worst;
}

template <typename Scalar>
bool check_type1_dominance(const BasicPolymatrixGame<Scalar>& g, Index i_star, Index target,
                           Player player, Scalar slack) {
  return type1_dominance_slack(g, i_star, target, player) >= slack;
}

template <typename Scalar>
bool check_type2_dominance(const BasicPolymatrixGame<Scalar>& g, Index i_star, Index j_star,
                           Index k_star, Scalar slack) {
  return type2_dominance_slack(g, i_star, j_star, k_star) >= slack;
}

}  // namespace polymanip

#endif  // POLYMANIP_DOMINANCE_HPP
