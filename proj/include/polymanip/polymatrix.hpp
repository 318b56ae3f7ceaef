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

#ifndef POLYMANIP_POLYMATRIX_HPP
#define POLYMANIP_POLYMATRIX_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "polymanip/types.hpp"

namespace polymanip {

enum class Player { One = 1, Two = 2, Three = 3 };

// Raised when a matrix does not fit the (n, m, l) shape of the game it is
// used with. `matrix()` names the offending matrix ("A21", "A31", ...).
class DimensionError : public std::invalid_argument {
 public:
  DimensionError(std::string matrix, const std::string& detail)
      : std::invalid_argument(matrix + ": " + detail), matrix_(std::move(matrix)) {}
  const std::string& matrix() const noexcept { return matrix_; }

 private:
  std::string matrix_;
};

// A 3-player polymatrix game. Every pairwise matrix is indexed with the
// lower-numbered player's action on rows:
//   A12, A21 : n x m      A13, A31 : n x l      A23, A32 : m x l
// so player 2's payoff is A21(a1, a2) + A23(a2, a3) and player 3's is
// A31(a1, a3) + A32(a2, a3).
template <typename Scalar>
class BasicPolymatrixGame {
 public:
  using MatrixType = Matrix<Scalar>;

  BasicPolymatrixGame(MatrixType a12, MatrixType a13, MatrixType a21, MatrixType a23,
                      MatrixType a31, MatrixType a32)
      : a12_(std::move(a12)), a13_(std::move(a13)), a21_(std::move(a21)),
        a23_(std::move(a23)), a31_(std::move(a31)), a32_(std::move(a32)) {
    const Index n = a12_.rows(), m = a12_.cols(), l = a13_.cols();
    if (n < 1 || m < 1 || l < 1) throw DimensionError("A12", "action counts must be >= 1");
    expect_shape("A13", a13_, n, l);
    expect_shape("A21", a21_, n, m);
    expect_shape("A23", a23_, m, l);
    expect_shape("A31", a31_, n, l);
    expect_shape("A32", a32_, m, l);
    for (const auto* mat : {&a12_, &a13_, &a21_, &a23_, &a31_, &a32_}) {
      if (!mat->allFinite()) throw std::invalid_argument("payoff entries must be finite");
    }
  }

  Index n() const { return a12_.rows(); }
  Index m() const { return a12_.cols(); }
  Index l() const { return a13_.cols(); }

  const MatrixType& A12() const { return a12_; }
  const MatrixType& A13() const { return a13_; }
  const MatrixType& A21() const { return a21_; }
  const MatrixType& A23() const { return a23_; }
  const MatrixType& A31() const { return a31_; }
  const MatrixType& A32() const { return a32_; }

  Index num_actions(Player p) const {
    switch (p) {
      case Player::One: return n();
      case Player::Two: return m();
      case Player::Three: return l();
    }
    return 0;
  }

  // The game in effect once the manipulator submits replacement matrices.
  BasicPolymatrixGame with_manipulation(MatrixType new21, MatrixType new31) const {
    expect_shape("A21", new21, n(), m());
    expect_shape("A31", new31, n(), l());
    return BasicPolymatrixGame(a12_, a13_, std::move(new21), a23_, std::move(new31), a32_);
  }

  static void expect_shape(const char* name, const MatrixType& mat, Index rows, Index cols) {
    if (mat.rows() != rows || mat.cols() != cols) {
      throw DimensionError(name, "expected " + std::to_string(rows) + "x" +
                                     std::to_string(cols) + ", got " +
                                     std::to_string(mat.rows()) + "x" +
                                     std::to_string(mat.cols()));
    }
  }

 private:
  MatrixType a12_, a13_, a21_, a23_, a31_, a32_;
};

using PolymatrixGame = BasicPolymatrixGame<double>;

// A probability vector over one player's actions.
template <typename Scalar>
class BasicMixedStrategy {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit BasicMixedStrategy(Vector<Scalar> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 1) throw std::invalid_argument("strategy over an empty action set");
    if (!probs_.allFinite() || (probs_.array() < Scalar(0)).any()) {
      throw std::invalid_argument("strategy entries must be finite and nonnegative");
    }
    if (std::abs(static_cast<double>(probs_.sum()) - 1.0) > kSumTolerance) {
      throw std::invalid_argument("strategy entries must sum to 1");
    }
  }

  static BasicMixedStrategy pure(Index num_actions, Index action) {
    if (action < 0 || action >= num_actions) throw std::out_of_range("pure action out of range");
    Vector<Scalar> v = Vector<Scalar>::Zero(num_actions);
    v(action) = Scalar(1);
    return BasicMixedStrategy(std::move(v));
  }

  static BasicMixedStrategy uniform(Index num_actions) {
    return BasicMixedStrategy(
        Vector<Scalar>::Constant(num_actions, Scalar(1) / Scalar(num_actions)));
  }

  const Vector<Scalar>& probs() const { return probs_; }
  Index size() const { return probs_.size(); }
  Scalar operator()(Index i) const { return probs_(i); }

 private:
  Vector<Scalar> probs_;
};

using MixedStrategy = BasicMixedStrategy<double>;

// The manipulator's per-round submission: a pure action plus the replacement
// payoff matrices of players 2 and 3.
struct CompleteStrategy {
  Index action = 0;
  MatrixXd A21;
  MatrixXd A31;
};

struct ActionProfile {
  Index a1 = 0, a2 = 0, a3 = 0;
  friend bool operator==(const ActionProfile&, const ActionProfile&) = default;
  friend auto operator<=>(const ActionProfile&, const ActionProfile&) = default;
};

template <typename Scalar>
void check_profile(const BasicPolymatrixGame<Scalar>& g, const ActionProfile& p) {
  if (p.a1 < 0 || p.a1 >= g.n() || p.a2 < 0 || p.a2 >= g.m() || p.a3 < 0 || p.a3 >= g.l()) {
    throw std::out_of_range("action profile out of range");
  }
}

// max_{k,l} |A(k,l)|
template <typename Derived>
typename Derived::Scalar inf_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.size() == 0 ? typename Derived::Scalar(0) : a.cwiseAbs().maxCoeff();
}

// ||new21 - A21_0||_inf + ||new31 - A31_0||_inf
template <typename Scalar>
Scalar manipulation_cost(const Matrix<Scalar>& new21, const Matrix<Scalar>& new31,
                         const BasicPolymatrixGame<Scalar>& base) {
  BasicPolymatrixGame<Scalar>::expect_shape("A21", new21, base.n(), base.m());
  BasicPolymatrixGame<Scalar>::expect_shape("A31", new31, base.n(), base.l());
  return inf_norm(new21 - base.A21()) + inf_norm(new31 - base.A31());
}

template <typename Scalar>
Scalar expected_utility(const BasicPolymatrixGame<Scalar>& g, const BasicMixedStrategy<Scalar>& x,
                        const BasicMixedStrategy<Scalar>& y, const BasicMixedStrategy<Scalar>& z,
                        Player player, Scalar cost = Scalar(0)) {
  if (x.size() != g.n() || y.size() != g.m() || z.size() != g.l()) {
    throw std::invalid_argument("strategy sizes do not match the game");
  }
  const auto& xs = x.probs();
  const auto& ys = y.probs();
  const auto& zs = z.probs();
  switch (player) {
    case Player::One:
      return xs.dot(g.A12() * ys) + xs.dot(g.A13() * zs) - cost;
    case Player::Two:
      if (cost != Scalar(0)) throw std::invalid_argument("only player 1 pays a manipulation cost");
      return xs.dot(g.A21() * ys) + ys.dot(g.A23() * zs);
    case Player::Three:
      if (cost != Scalar(0)) throw std::invalid_argument("only player 1 pays a manipulation cost");
      return xs.dot(g.A31() * zs) + ys.dot(g.A32() * zs);
  }
  return Scalar(0);
}

template <typename Scalar>
Scalar realized_utility(const BasicPolymatrixGame<Scalar>& g, const ActionProfile& p,
                        Player player, Scalar cost = Scalar(0)) {
  check_profile(g, p);
  switch (player) {
    case Player::One:
      return g.A12()(p.a1, p.a2) + g.A13()(p.a1, p.a3) - cost;
    case Player::Two:
      if (cost != Scalar(0)) throw std::invalid_argument("only player 1 pays a manipulation cost");
      return g.A21()(p.a1, p.a2) + g.A23()(p.a2, p.a3);
    case Player::Three:
      if (cost != Scalar(0)) throw std::invalid_argument("only player 1 pays a manipulation cost");
      return g.A31()(p.a1, p.a3) + g.A32()(p.a2, p.a3);
  }
  return Scalar(0);
}

// Expected payoff of every pure action of `player` (2 or 3) against the
// other two players' strategies. For player 2 the opponents are (x, z); for
// player 3 they are (x, y).
template <typename Scalar>
Vector<Scalar> counterfactual_payoffs(const BasicPolymatrixGame<Scalar>& g, Player player,
                                      const BasicMixedStrategy<Scalar>& x,
                                      const BasicMixedStrategy<Scalar>& other) {
  if (x.size() != g.n()) throw std::invalid_argument("manipulator strategy size mismatch");
  switch (player) {
    case Player::Two:
      if (other.size() != g.l()) throw std::invalid_argument("player 3 strategy size mismatch");
      return g.A21().transpose() * x.probs() + g.A23() * other.probs();
    case Player::Three:
      if (other.size() != g.m()) throw std::invalid_argument("player 2 strategy size mismatch");
      return g.A31().transpose() * x.probs() + g.A32().transpose() * other.probs();
    case Player::One:
      break;
  }
  throw std::invalid_argument("the manipulator does not receive counterfactual feedback");
}

}  // namespace polymanip

#endif  // POLYMANIP_POLYMATRIX_HPP
