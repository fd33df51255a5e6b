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

#include "sgnash/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "sgnash/error.hpp"

namespace sgnash {
namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kValueResidualTolerance = 1e-9;

std::string Where(int x, int a1, int a2) {
  std::ostringstream os;
  os << "state " << x << " joint action (" << a1 << ", " << a2 << ")";
  return os.str();
}

void RequireShape(const StochasticGame& game, const JointStrategy& strategy) {
  Require(strategy.MatchesShape(game), ErrorCode::kDimensionMismatch,
          "strategy shape does not match the game's action sets");
}

}  // namespace

GameBuilder::GameBuilder(double discount,
                         std::vector<std::array<int, 2>> actions)
    : discount_(discount), actions_(std::move(actions)) {
  joint_offset_.assign(actions_.size() + 1, 0);
  for (std::size_t x = 0; x < actions_.size(); ++x) {
    const int m1 = std::max(actions_[x][0], 0);
    const int m2 = std::max(actions_[x][1], 0);
    joint_offset_[x + 1] = joint_offset_[x] + static_cast<std::size_t>(m1) * m2;
  }
  successors_.resize(actions_.size());
  explicit_successors_.assign(actions_.size(), false);
  trans_.resize(joint_offset_.back());
  rewards_.assign(joint_offset_.back(), {0.0, 0.0});
}

std::size_t GameBuilder::Joint(int x, int a1, int a2) const {
  Require(x >= 0 && x < static_cast<int>(actions_.size()),
          ErrorCode::kInvalidGame, "state index out of range");
  Require(a1 >= 0 && a1 < actions_[x][0] && a2 >= 0 && a2 < actions_[x][1],
          ErrorCode::kInvalidGame, "action index out of range at " + Where(x, a1, a2));
  return joint_offset_[x] + static_cast<std::size_t>(a1) * actions_[x][1] + a2;
}

void GameBuilder::SetSuccessors(int x, std::vector<int> successors) {
  Require(x >= 0 && x < static_cast<int>(actions_.size()),
          ErrorCode::kInvalidGame, "state index out of range");
  for (int y : successors) {
    Require(y >= 0 && y < static_cast<int>(actions_.size()),
            ErrorCode::kInvalidGame, "successor index out of range");
  }
  std::sort(successors.begin(), successors.end());
  successors.erase(std::unique(successors.begin(), successors.end()),
                   successors.end());
  successors_[x] = std::move(successors);
  explicit_successors_[x] = true;
}

void GameBuilder::SetTransition(int x, int a1, int a2,
                                std::vector<Transition> probs) {
  const std::size_t k = Joint(x, a1, a2);
  for (const Transition& t : probs) {
    Require(t.next >= 0 && t.next < static_cast<int>(actions_.size()),
            ErrorCode::kInvalidGame,
            "transition target out of range at " + Where(x, a1, a2));
  }
  std::sort(probs.begin(), probs.end(),
            [](const Transition& a, const Transition& b) { return a.next < b.next; });
  // Merge duplicate targets.
  std::vector<Transition> merged;
  for (const Transition& t : probs) {
    if (!merged.empty() && merged.back().next == t.next) {
      merged.back().prob += t.prob;
    } else {
      merged.push_back(t);
    }
  }
  trans_[k] = std::move(merged);
}

void GameBuilder::SetReward(int x, int a1, int a2, double r1, double r2) {
  rewards_[Joint(x, a1, a2)] = {r1, r2};
}

StochasticGame GameBuilder::Build() && {
  StochasticGame g;
  g.discount_ = discount_;
  g.actions_ = std::move(actions_);
  g.joint_offset_ = std::move(joint_offset_);
  for (const auto& m : g.actions_) {
    g.total_actions_[0] += m[0];
    g.total_actions_[1] += m[1];
  }
  const int num_states = static_cast<int>(g.actions_.size());
  g.succ_offset_.assign(1, 0);
  for (int x = 0; x < num_states; ++x) {
    std::vector<int> succ = successors_[x];
    if (!explicit_successors_[x]) {
      for (std::size_t k = g.joint_offset_[x]; k < g.joint_offset_[x + 1]; ++k) {
        for (const Transition& t : trans_[k]) succ.push_back(t.next);
      }
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    g.successors_.insert(g.successors_.end(), succ.begin(), succ.end());
    g.succ_offset_.push_back(g.successors_.size());
  }
  g.trans_offset_.assign(1, 0);
  for (auto& row : trans_) {
    g.trans_.insert(g.trans_.end(), row.begin(), row.end());
    g.trans_offset_.push_back(g.trans_.size());
  }
  g.rewards_ = std::move(rewards_);
  return g;
}

JointStrategy::JointStrategy(const StochasticGame& game) {
  for (int i = 0; i < kNumPlayers; ++i) {
    offset_[i].assign(game.num_states() + 1, 0);
    for (int x = 0; x < game.num_states(); ++x) {
      offset_[i][x + 1] = offset_[i][x] + game.num_actions(i, x);
    }
    prob_[i].assign(offset_[i].back(), 0.0);
  }
}

bool JointStrategy::MatchesShape(const StochasticGame& game) const {
  if (num_states() != game.num_states()) return false;
  for (int i = 0; i < kNumPlayers; ++i) {
    for (int x = 0; x < game.num_states(); ++x) {
      if (offset_[i][x + 1] - offset_[i][x] !=
          static_cast<std::size_t>(game.num_actions(i, x))) {
        return false;
      }
    }
  }
  return true;
}

std::vector<std::string> ValidateGame(const StochasticGame& game) {
  std::vector<std::string> out;
  const double beta = game.discount();
  if (!(beta > 0.0 && beta < 1.0)) {
    out.push_back("discount " + std::to_string(beta) + " is not inside (0, 1)");
  }
  for (int x = 0; x < game.num_states(); ++x) {
    const int m1 = game.num_actions(0, x);
    const int m2 = game.num_actions(1, x);
    if (m1 < 1 || m2 < 1) {
      out.push_back("state " + std::to_string(x) + " has an empty action set");
      continue;
    }
    const auto succ = game.successors(x);
    bool absorbing = succ.size() == 1 && succ[0] == x;
    for (int a1 = 0; a1 < m1; ++a1) {
      for (int a2 = 0; a2 < m2; ++a2) {
        double sum = 0.0;
        for (const Transition& t : game.transitions(x, a1, a2)) {
          if (!(t.prob >= 0.0) || t.prob > 1.0) {
            out.push_back(Where(x, a1, a2) + ": probability " +
                          std::to_string(t.prob) + " to state " +
                          std::to_string(t.next) + " outside [0, 1]");
          }
          if (!std::binary_search(succ.begin(), succ.end(), t.next)) {
            out.push_back(Where(x, a1, a2) + ": target " +
                          std::to_string(t.next) + " not in successor set");
          }
          sum += t.prob;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
          std::ostringstream os;
          os.precision(17);
          os << Where(x, a1, a2) << ": transition row sums to " << sum;
          out.push_back(os.str());
        }
        if (!std::isfinite(game.reward(0, x, a1, a2)) ||
            !std::isfinite(game.reward(1, x, a1, a2))) {
          out.push_back(Where(x, a1, a2) + ": non-finite reward");
        }
      }
    }
    if (absorbing) {
      bool has_self_loop = false;
      for (int a1 = 0; a1 < m1 && !has_self_loop; ++a1) {
        for (int a2 = 0; a2 < m2 && !has_self_loop; ++a2) {
          const auto row = game.transitions(x, a1, a2);
          has_self_loop = row.size() == 1 && row[0].next == x &&
                          std::abs(row[0].prob - 1.0) <= kRowSumTolerance;
        }
      }
      if (!has_self_loop) {
        out.push_back("absorbing state " + std::to_string(x) +
                      " lacks a probability-one self-loop");
      }
    }
  }
  return out;
}

std::vector<std::string> ValidateStrategy(const StochasticGame& game,
                                          const JointStrategy& strategy) {
  std::vector<std::string> out;
  if (!strategy.MatchesShape(game)) {
    out.push_back("strategy shape does not match the game's action sets");
    return out;
  }
  for (int i = 0; i < kNumPlayers; ++i) {
    for (int x = 0; x < game.num_states(); ++x) {
      double sum = 0.0;
      for (double p : strategy.at(i, x)) {
        if (!(p >= 0.0)) {
          out.push_back("player " + std::to_string(i) + " state " +
                        std::to_string(x) + ": negative probability");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        out.push_back("player " + std::to_string(i) + " state " +
                      std::to_string(x) + ": probabilities sum to " +
                      std::to_string(sum));
      }
    }
  }
  return out;
}

ValueVector ExpectedReward(const StochasticGame& game,
                           const JointStrategy& strategy) {
  RequireShape(game, strategy);
  ValueVector r{Eigen::VectorXd::Zero(game.num_states()),
                Eigen::VectorXd::Zero(game.num_states())};
  for (int x = 0; x < game.num_states(); ++x) {
    const auto p1 = strategy.at(0, x);
    const auto p2 = strategy.at(1, x);
    for (int a1 = 0; a1 < game.num_actions(0, x); ++a1) {
      for (int a2 = 0; a2 < game.num_actions(1, x); ++a2) {
        const double w = p1[a1] * p2[a2];
        r[0](x) += w * game.reward(0, x, a1, a2);
        r[1](x) += w * game.reward(1, x, a1, a2);
      }
    }
  }
  return r;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> TransitionMatrix(
    const StochasticGame& game, const JointStrategy& strategy) {
  RequireShape(game, strategy);
  const int n = game.num_states();
  std::vector<Eigen::Triplet<double>> entries;
  for (int x = 0; x < n; ++x) {
    const auto p1 = strategy.at(0, x);
    const auto p2 = strategy.at(1, x);
    for (int a1 = 0; a1 < game.num_actions(0, x); ++a1) {
      for (int a2 = 0; a2 < game.num_actions(1, x); ++a2) {
        const double w = p1[a1] * p2[a2];
        for (const Transition& t : game.transitions(x, a1, a2)) {
          entries.emplace_back(x, t.next, w * t.prob);
        }
      }
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> p(n, n);
  p.setFromTriplets(entries.begin(), entries.end());
  return p;
}

ValueVector StrategyValue(const StochasticGame& game,
                          const JointStrategy& strategy) {
  const ValueVector r = ExpectedReward(game, strategy);
  const Eigen::MatrixXd p = Eigen::MatrixXd(TransitionMatrix(game, strategy));
  const int n = game.num_states();
  const double beta = game.discount();
  const Eigen::MatrixXd a =
      Eigen::MatrixXd::Identity(n, n) - beta * p;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  ValueVector v;
  for (int i = 0; i < kNumPlayers; ++i) {
    v[i] = lu.solve(r[i]);
    const double residual = (v[i] - r[i] - beta * p * v[i]).lpNorm<Eigen::Infinity>();
    if (!(residual < kValueResidualTolerance * (1.0 + v[i].lpNorm<Eigen::Infinity>()))) {
      Fail(ErrorCode::kNumeric,
           "strategy evaluation residual " + std::to_string(residual) +
               " exceeds tolerance");
    }
  }
  return v;
}

Eigen::VectorXd BellmanQ(const StochasticGame& game, const ValueVector& v,
                         const JointStrategy& strategy, int player, int x) {
  RequireShape(game, strategy);
  Require(player == 0 || player == 1, ErrorCode::kInvalidArgument,
          "player must be 0 or 1");
  Require(x >= 0 && x < game.num_states(), ErrorCode::kInvalidArgument,
          "state index out of range");
  Require(v[player].size() == game.num_states(), ErrorCode::kDimensionMismatch,
          "value vector length does not match the state count");
  const double beta = game.discount();
  const int m1 = game.num_actions(0, x);
  const int m2 = game.num_actions(1, x);
  const auto opponent = strategy.at(1 - player, x);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(game.num_actions(player, x));
  for (int a1 = 0; a1 < m1; ++a1) {
    for (int a2 = 0; a2 < m2; ++a2) {
      double backup = game.reward(player, x, a1, a2);
      for (const Transition& t : game.transitions(x, a1, a2)) {
        backup += beta * t.prob * v[player](t.next);
      }
      if (player == 0) {
        q(a1) += opponent[a2] * backup;
      } else {
        q(a2) += opponent[a1] * backup;
      }
    }
  }
  return q;
}

JointStrategy UniformStrategy(const StochasticGame& game) {
  JointStrategy s(game);
  for (int i = 0; i < kNumPlayers; ++i) {
    for (int x = 0; x < game.num_states(); ++x) {
      auto row = s.at(i, x);
      std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
    }
  }
  return s;
}

StochasticGame SingleStateGame(const Eigen::MatrixXd& rewards1,
                               const Eigen::MatrixXd& rewards2,
                               double discount) {
  Require(rewards1.rows() == rewards2.rows() && rewards1.cols() == rewards2.cols(),
          ErrorCode::kDimensionMismatch, "reward matrices differ in shape");
  const int m1 = static_cast<int>(rewards1.rows());
  const int m2 = static_cast<int>(rewards1.cols());
  GameBuilder b(discount, {{m1, m2}});
  for (int a1 = 0; a1 < m1; ++a1) {
    for (int a2 = 0; a2 < m2; ++a2) {
      b.SetTransition(0, a1, a2, {{0, 1.0}});
      b.SetReward(0, a1, a2, rewards1(a1, a2), rewards2(a1, a2));
    }
  }
  return std::move(b).Build();
}

}  // namespace sgnash
