// Copyright 2026 The sgnash Authors
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

#ifndef SGNASH_GAME_HPP_
#define SGNASH_GAME_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace sgnash {

// Players are indexed 0 and 1 throughout the library. Player 0 picks a1,
// player 1 picks a2.
inline constexpr int kNumPlayers = 2;

struct Transition {
  int next = 0;
  double prob = 0.0;
};

class GameBuilder;

// A finite two-player discounted stochastic game. Immutable once built.
//
// Joint actions of state x are laid out row-major in (a1, a2); each joint
// action owns a sparse successor distribution and a reward pair.
class StochasticGame {
 public:
  StochasticGame() = default;

  int num_states() const { return static_cast<int>(actions_.size()); }
  double discount() const { return discount_; }

  int num_actions(int player, int x) const { return actions_[x][player]; }
  // Sum of num_actions(player, x) over all states.
  int total_actions(int player) const { return total_actions_[player]; }

  std::span<const int> successors(int x) const {
    return {successors_.data() + succ_offset_[x],
            succ_offset_[x + 1] - succ_offset_[x]};
  }

  std::size_t joint_index(int x, int a1, int a2) const {
    return joint_offset_[x] +
           static_cast<std::size_t>(a1) * actions_[x][1] + a2;
  }
  std::size_t num_joint_actions() const { return joint_offset_.back(); }

  std::span<const Transition> transitions(int x, int a1, int a2) const {
    const std::size_t k = joint_index(x, a1, a2);
    return {trans_.data() + trans_offset_[k],
            trans_offset_[k + 1] - trans_offset_[k]};
  }

  double reward(int player, int x, int a1, int a2) const {
    return rewards_[joint_index(x, a1, a2)][player];
  }

 private:
  friend class GameBuilder;

  double discount_ = 0.0;
  std::vector<std::array<int, 2>> actions_;
  std::array<int, 2> total_actions_{0, 0};
  std::vector<std::size_t> succ_offset_{0};
  std::vector<int> successors_;
  std::vector<std::size_t> joint_offset_{0};
  std::vector<std::size_t> trans_offset_;
  std::vector<Transition> trans_;
  std::vector<std::array<double, 2>> rewards_;
};

// Accumulates a game. Structural errors (indices out of range) throw
// immediately; semantic invariants are left to ValidateGame so callers can
// inspect every violation at once.
class GameBuilder {
 public:
  GameBuilder(double discount, std::vector<std::array<int, 2>> actions);

  // Optional explicit successor set for x. When omitted, U(x) is the union of
  // the supports of x's transition rows.
  void SetSuccessors(int x, std::vector<int> successors);
  void SetTransition(int x, int a1, int a2, std::vector<Transition> probs);
  void SetReward(int x, int a1, int a2, double r1, double r2);

  StochasticGame Build() &&;

 private:
  std::size_t Joint(int x, int a1, int a2) const;

  double discount_;
  std::vector<std::array<int, 2>> actions_;
  std::vector<std::size_t> joint_offset_;
  std::vector<std::vector<int>> successors_;
  std::vector<bool> explicit_successors_;
  std::vector<std::vector<Transition>> trans_;
  std::vector<std::array<double, 2>> rewards_;
};

// Stationary randomized strategies of both players, stored as one flat
// probability vector per player with per-state offsets.
class JointStrategy {
 public:
  JointStrategy() = default;
  explicit JointStrategy(const StochasticGame& game);

  std::span<double> at(int player, int x) {
    return {prob_[player].data() + offset_[player][x],
            offset_[player][x + 1] - offset_[player][x]};
  }
  std::span<const double> at(int player, int x) const {
    return {prob_[player].data() + offset_[player][x],
            offset_[player][x + 1] - offset_[player][x]};
  }
  int num_states() const {
    return static_cast<int>(offset_[0].empty() ? 0 : offset_[0].size() - 1);
  }
  std::vector<double>& flat(int player) { return prob_[player]; }
  const std::vector<double>& flat(int player) const { return prob_[player]; }

  // True when the shape equals the game's action counts.
  bool MatchesShape(const StochasticGame& game) const;

 private:
  std::array<std::vector<double>, 2> prob_;
  std::array<std::vector<std::size_t>, 2> offset_;
};

using ValueVector = std::array<Eigen::VectorXd, 2>;

// Reports every violated StochasticGame invariant, naming state and action
// indices. An empty result means the game is valid.
std::vector<std::string> ValidateGame(const StochasticGame& game);

// Violations of the JointStrategy invariants (shape, sign, row sums).
std::vector<std::string> ValidateStrategy(const StochasticGame& game,
                                          const JointStrategy& strategy);

// r^i(pi)(x) = pi2(x)^T r^i(x) pi1(x).
ValueVector ExpectedReward(const StochasticGame& game,
                           const JointStrategy& strategy);

// Row-stochastic P(pi) with P(x, y) = sum_a pi1 pi2 p(y | x, a).
Eigen::SparseMatrix<double, Eigen::RowMajor> TransitionMatrix(
    const StochasticGame& game, const JointStrategy& strategy);

// v^i = (I - beta P(pi))^{-1} r^i(pi), solved densely. Throws kNumeric if the
// residual exceeds 1e-9.
ValueVector StrategyValue(const StochasticGame& game,
                          const JointStrategy& strategy);

// Q^i(x, a^i) marginalised over the opponent's strategy at x.
Eigen::VectorXd BellmanQ(const StochasticGame& game, const ValueVector& v,
                         const JointStrategy& strategy, int player, int x);

JointStrategy UniformStrategy(const StochasticGame& game);

// A one-state game whose only transition is a self-loop. rewards1/rewards2 are
// indexed [a1][a2].
StochasticGame SingleStateGame(const Eigen::MatrixXd& rewards1,
                               const Eigen::MatrixXd& rewards2,
                               double discount);

}  // namespace sgnash

#endif  // SGNASH_GAME_HPP_
