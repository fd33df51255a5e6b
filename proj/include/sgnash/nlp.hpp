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

#ifndef SGNASH_NLP_HPP_
#define SGNASH_NLP_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sgnash/game.hpp"

namespace sgnash {

// Problem sizes. The "full" counts treat every probability pi^i(x, a) as a
// variable and pair each value constraint with one non-negativity
// constraint; the "packed" counts describe the vector the solver iterates
// on, where the highest-indexed action of every state is eliminated through
// the simplex equality.
struct ProblemCensus {
  int num_states = 0;
  std::array<int, 2> total_actions{0, 0};
  std::int64_t full_variables = 0;
  std::int64_t full_constraints = 0;
  std::int64_t packed_variables = 0;
  std::int64_t packed_constraints = 0;
};

enum class ConstraintKind : std::uint8_t {
  kValue,        // h_i(x, a^i) <= 0
  kSum,          // sum of retained pi^i(x, .) - 1 <= 0
  kNonNegative,  // -pi^i(x, a) <= 0
};

struct ConstraintInfo {
  ConstraintKind kind;
  int player;  // Whose value (kValue) or whose probability (kSum, kNonNegative).
  int state;
  int action;  // kSum refers to the eliminated action.
};

// Per joint action and player: r^i(x, a) + beta * sum_y p(y|x,a) v^i(y), or
// just the discounted continuation when the reward term is dropped.
using Backups = std::vector<std::array<double, 2>>;

// The constrained program whose zero-objective feasible points are exactly
// the stationary Nash equilibria.
//
// Packed layout: [v^0 | v^1 | pi^0 retained | pi^1 retained], where the
// retained block of (i, x) holds pi^i(x, a) for a < m^i(x) - 1.
//
// Constraint order: value constraints of player 0 then player 1, one per
// (x, a^i); then probability constraints of player 0 then player 1, one per
// (x, a^i) with m^i(x) >= 2. The probability constraint of an eliminated
// action is the sum constraint. States with a single action have a fixed
// probability and contribute no probability constraint.
//
// The game must outlive the Problem.
class Problem {
 public:
  explicit Problem(const StochasticGame& game);

  const StochasticGame& game() const { return *game_; }
  int num_variables() const { return num_variables_; }
  int num_constraints() const { return static_cast<int>(info_.size()); }

  int value_index(int player, int x) const { return player * num_states_ + x; }
  // First packed index of the retained block of (player, x); the block holds
  // num_actions(player, x) - 1 entries.
  int strategy_offset(int player, int x) const { return strat_offset_[player][x]; }

  const ConstraintInfo& constraint(int j) const { return info_[j]; }
  int value_constraint(int player, int x, int a) const {
    return value_first_[player][x] + a;
  }
  // -1 when the state has a single action for that player.
  int probability_constraint(int player, int x, int a) const {
    return prob_first_[player][x] < 0 ? -1 : prob_first_[player][x] + a;
  }
  int num_value_constraints() const { return num_value_constraints_; }

  Eigen::VectorXd Pack(const ValueVector& v, const JointStrategy& pi) const;
  ValueVector UnpackValues(const Eigen::VectorXd& z) const;
  // Reconstructs full probability vectors; the eliminated entry absorbs the
  // remaining mass. Applied to a direction, the eliminated entry is minus the
  // sum of the retained ones, so every state block sums to zero.
  JointStrategy UnpackStrategy(const Eigen::VectorXd& z, bool is_direction = false) const;

  Backups ComputeBackups(const ValueVector& v, bool with_reward) const;

  double Objective(const Eigen::VectorXd& z) const;
  // Sum over (i, x, a^i) of -pi^i(x, a^i) h_i(x, a^i).
  double ObjectiveProductSum(const Eigen::VectorXd& z) const;
  Eigen::VectorXd Constraints(const Eigen::VectorXd& z) const;
  Eigen::VectorXd ObjectiveGradient(const Eigen::VectorXd& z) const;

  // Column j is grad g_j in packed coordinates. The sparsity pattern depends
  // only on the game, never on z.
  Eigen::SparseMatrix<double> ConstraintGradients(const Eigen::VectorXd& z) const;
  // Refreshes the values of a matrix previously returned by
  // ConstraintGradients without touching its pattern.
  void UpdateConstraintGradients(const Eigen::VectorXd& z,
                                 Eigen::SparseMatrix<double>* g) const;

  // Value-constraint left-hand sides h_i(x, a) for all (i, x, a) in
  // constraint order.
  Eigen::VectorXd ValueConstraints(const Eigen::VectorXd& z) const;

  ProblemCensus Census() const;

 private:
  void CheckSize(const Eigen::VectorXd& z) const;
  void FillGradientValues(const Eigen::VectorXd& z, double* values) const;

  const StochasticGame* game_;
  int num_states_;
  int num_variables_;
  int num_value_constraints_;
  std::array<std::vector<int>, 2> strat_offset_;
  std::array<std::vector<int>, 2> value_first_;
  std::array<std::vector<int>, 2> prob_first_;
  std::vector<ConstraintInfo> info_;
  // Sorted {x} union U(x), the value-variable support of x's value constraints.
  std::vector<std::vector<int>> value_support_;
  Eigen::SparseMatrix<double> pattern_;
};

ProblemCensus Census(const StochasticGame& game);

}  // namespace sgnash

#endif  // SGNASH_NLP_HPP_
