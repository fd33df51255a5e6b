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

#include "sgnash/nlp.hpp"

#include <algorithm>

#include "sgnash/error.hpp"

namespace sgnash {

Problem::Problem(const StochasticGame& game) : game_(&game) {
  Require(game.num_states() > 0, ErrorCode::kInvalidGame, "game has no states");
  const int s = game.num_states();
  num_states_ = s;

  int next = 2 * s;
  for (int i = 0; i < kNumPlayers; ++i) {
    strat_offset_[i].resize(s);
    for (int x = 0; x < s; ++x) {
      strat_offset_[i][x] = next;
      next += game.num_actions(i, x) - 1;
    }
  }
  num_variables_ = next;

  int row = 0;
  for (int i = 0; i < kNumPlayers; ++i) {
    value_first_[i].resize(s);
    for (int x = 0; x < s; ++x) {
      value_first_[i][x] = row;
      for (int a = 0; a < game.num_actions(i, x); ++a) {
        info_.push_back({ConstraintKind::kValue, i, x, a});
      }
      row += game.num_actions(i, x);
    }
  }
  num_value_constraints_ = row;
  for (int i = 0; i < kNumPlayers; ++i) {
    prob_first_[i].assign(s, -1);
    for (int x = 0; x < s; ++x) {
      const int m = game.num_actions(i, x);
      if (m < 2) continue;
      prob_first_[i][x] = row;
      for (int a = 0; a < m; ++a) {
        info_.push_back({a + 1 < m ? ConstraintKind::kNonNegative : ConstraintKind::kSum,
                         i, x, a});
      }
      row += m;
    }
  }

  value_support_.resize(s);
  for (int x = 0; x < s; ++x) {
    auto& sup = value_support_[x];
    const auto succ = game.successors(x);
    sup.assign(succ.begin(), succ.end());
    sup.push_back(x);
    std::sort(sup.begin(), sup.end());
    sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
  }

  // Column pattern, emitted in the same order FillGradientValues writes.
  std::vector<int> outer{0};
  std::vector<int> inner;
  for (const ConstraintInfo& c : info_) {
    const int x = c.state;
    switch (c.kind) {
      case ConstraintKind::kValue: {
        const int other = 1 - c.player;
        for (int y : value_support_[x]) inner.push_back(value_index(c.player, y));
        const int off = strategy_offset(other, x);
        for (int k = 0; k + 1 < game.num_actions(other, x); ++k) inner.push_back(off + k);
        break;
      }
      case ConstraintKind::kSum: {
        const int off = strategy_offset(c.player, x);
        for (int k = 0; k + 1 < game.num_actions(c.player, x); ++k) inner.push_back(off + k);
        break;
      }
      case ConstraintKind::kNonNegative:
        inner.push_back(strategy_offset(c.player, x) + c.action);
        break;
    }
    outer.push_back(static_cast<int>(inner.size()));
  }
  std::vector<double> zeros(inner.size(), 0.0);
  pattern_ = Eigen::Map<const Eigen::SparseMatrix<double>>(
      num_variables_, num_constraints(), static_cast<Eigen::Index>(inner.size()),
      outer.data(), inner.data(), zeros.data());
}

void Problem::CheckSize(const Eigen::VectorXd& z) const {
  Require(z.size() == num_variables_, ErrorCode::kDimensionMismatch,
          "packed point has " + std::to_string(z.size()) + " entries, expected " +
              std::to_string(num_variables_));
}

Eigen::VectorXd Problem::Pack(const ValueVector& v, const JointStrategy& pi) const {
  Require(v[0].size() == num_states_ && v[1].size() == num_states_,
          ErrorCode::kDimensionMismatch, "value vector length mismatch");
  Require(pi.MatchesShape(*game_), ErrorCode::kDimensionMismatch,
          "strategy shape does not match the game");
  Eigen::VectorXd z(num_variables_);
  z.head(num_states_) = v[0];
  z.segment(num_states_, num_states_) = v[1];
  for (int i = 0; i < kNumPlayers; ++i) {
    for (int x = 0; x < num_states_; ++x) {
      const auto row = pi.at(i, x);
      for (std::size_t k = 0; k + 1 < row.size(); ++k) {
        z[strategy_offset(i, x) + static_cast<int>(k)] = row[k];
      }
    }
  }
  return z;
}

ValueVector Problem::UnpackValues(const Eigen::VectorXd& z) const {
  CheckSize(z);
  return {z.head(num_states_), z.segment(num_states_, num_states_)};
}

JointStrategy Problem::UnpackStrategy(const Eigen::VectorXd& z, bool is_direction) const {
  CheckSize(z);
  JointStrategy pi(*game_);
  for (int i = 0; i < kNumPlayers; ++i) {
    for (int x = 0; x < num_states_; ++x) {
      auto row = pi.at(i, x);
      double rest = is_direction ? 0.0 : 1.0;
      for (std::size_t k = 0; k + 1 < row.size(); ++k) {
        row[k] = z[strategy_offset(i, x) + static_cast<int>(k)];
        rest -= row[k];
      }
      row.back() = rest;
    }
  }
  return pi;
}

Backups Problem::ComputeBackups(const ValueVector& v, bool with_reward) const {
  const StochasticGame& g = *game_;
  const double beta = g.discount();
  Backups out(g.num_joint_actions());
  for (int x = 0; x < num_states_; ++x) {
    for (int a1 = 0; a1 < g.num_actions(0, x); ++a1) {
      for (int a2 = 0; a2 < g.num_actions(1, x); ++a2) {
        double c0 = 0.0;
        double c1 = 0.0;
        for (const Transition& t : g.transitions(x, a1, a2)) {
          c0 += t.prob * v[0][t.next];
          c1 += t.prob * v[1][t.next];
        }
        auto& e = out[g.joint_index(x, a1, a2)];
        e[0] = beta * c0;
        e[1] = beta * c1;
        if (with_reward) {
          e[0] += g.reward(0, x, a1, a2);
          e[1] += g.reward(1, x, a1, a2);
        }
      }
    }
  }
  return out;
}

double Problem::Objective(const Eigen::VectorXd& z) const {
  CheckSize(z);
  const StochasticGame& g = *game_;
  const ValueVector v = UnpackValues(z);
  const JointStrategy pi = UnpackStrategy(z);
  const Backups e = ComputeBackups(v, true);
  double f = v[0].sum() + v[1].sum();
  for (int x = 0; x < num_states_; ++x) {
    const auto p1 = pi.at(0, x);
    const auto p2 = pi.at(1, x);
    for (std::size_t a1 = 0; a1 < p1.size(); ++a1) {
      for (std::size_t a2 = 0; a2 < p2.size(); ++a2) {
        const auto& q = e[g.joint_index(x, static_cast<int>(a1), static_cast<int>(a2))];
        f -= p1[a1] * p2[a2] * (q[0] + q[1]);
      }
    }
  }
  return f;
}

Eigen::VectorXd Problem::ValueConstraints(const Eigen::VectorXd& z) const {
  CheckSize(z);
  const StochasticGame& g = *game_;
  const ValueVector v = UnpackValues(z);
  const JointStrategy pi = UnpackStrategy(z);
  const Backups e = ComputeBackups(v, true);
  Eigen::VectorXd h(num_value_constraints_);
  for (int x = 0; x < num_states_; ++x) {
    const auto p1 = pi.at(0, x);
    const auto p2 = pi.at(1, x);
    for (std::size_t a1 = 0; a1 < p1.size(); ++a1) {
      double acc = 0.0;
      for (std::size_t a2 = 0; a2 < p2.size(); ++a2) {
        acc += p2[a2] * e[g.joint_index(x, static_cast<int>(a1), static_cast<int>(a2))][0];
      }
      h[value_constraint(0, x, static_cast<int>(a1))] = acc - v[0][x];
    }
    for (std::size_t a2 = 0; a2 < p2.size(); ++a2) {
      double acc = 0.0;
      for (std::size_t a1 = 0; a1 < p1.size(); ++a1) {
        acc += p1[a1] * e[g.joint_index(x, static_cast<int>(a1), static_cast<int>(a2))][1];
      }
      h[value_constraint(1, x, static_cast<int>(a2))] = acc - v[1][x];
    }
  }
  return h;
}

double Problem::ObjectiveProductSum(const Eigen::VectorXd& z) const {
  const Eigen::VectorXd h = ValueConstraints(z);
  const JointStrategy pi = UnpackStrategy(z);
  double total = 0.0;
  for (int i = 0; i < kNumPlayers; ++i) {
    for (int x = 0; x < num_states_; ++x) {
      const auto row = pi.at(i, x);
      for (std::size_t a = 0; a < row.size(); ++a) {
        total -= row[a] * h[value_constraint(i, x, static_cast<int>(a))];
      }
    }
  }
  return total;
}

Eigen::VectorXd Problem::Constraints(const Eigen::VectorXd& z) const {
  Eigen::VectorXd out(num_constraints());
  out.head(num_value_constraints_) = ValueConstraints(z);
  for (int j = num_value_constraints_; j < num_constraints(); ++j) {
    const ConstraintInfo& c = info_[j];
    const int off = strategy_offset(c.player, c.state);
    if (c.kind == ConstraintKind::kNonNegative) {
      out[j] = -z[off + c.action];
    } else {
      out[j] = z.segment(off, c.action).sum() - 1.0;
    }
  }
  return out;
}

Eigen::VectorXd Problem::ObjectiveGradient(const Eigen::VectorXd& z) const {
  CheckSize(z);
  const StochasticGame& g = *game_;
  const double beta = g.discount();
  const ValueVector v = UnpackValues(z);
  const JointStrategy pi = UnpackStrategy(z);
  const Backups e = ComputeBackups(v, true);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(num_variables_);
  grad.head(2 * num_states_).setOnes();
  std::vector<double> full1;
  std::vector<double> full2;
  for (int x = 0; x < num_states_; ++x) {
    const auto p1 = pi.at(0, x);
    const auto p2 = pi.at(1, x);
    full1.assign(p1.size(), 0.0);
    full2.assign(p2.size(), 0.0);
    for (std::size_t a1 = 0; a1 < p1.size(); ++a1) {
      for (std::size_t a2 = 0; a2 < p2.size(); ++a2) {
        const int i1 = static_cast<int>(a1);
        const int i2 = static_cast<int>(a2);
        const auto& q = e[g.joint_index(x, i1, i2)];
        const double sum_q = q[0] + q[1];
        full1[a1] -= p2[a2] * sum_q;
        full2[a2] -= p1[a1] * sum_q;
        const double w = beta * p1[a1] * p2[a2];
        if (w == 0.0) continue;
        for (const Transition& t : g.transitions(x, i1, i2)) {
          grad[value_index(0, t.next)] -= w * t.prob;
          grad[value_index(1, t.next)] -= w * t.prob;
        }
      }
    }
    for (std::size_t k = 0; k + 1 < full1.size(); ++k) {
      grad[strategy_offset(0, x) + static_cast<int>(k)] = full1[k] - full1.back();
    }
    for (std::size_t k = 0; k + 1 < full2.size(); ++k) {
      grad[strategy_offset(1, x) + static_cast<int>(k)] = full2[k] - full2.back();
    }
  }
  return grad;
}

void Problem::FillGradientValues(const Eigen::VectorXd& z, double* values) const {
  const StochasticGame& g = *game_;
  const double beta = g.discount();
  const ValueVector v = UnpackValues(z);
  const JointStrategy pi = UnpackStrategy(z);
  const Backups e = ComputeBackups(v, true);
  std::vector<int> pos(num_states_, -1);
  std::vector<double> coef;
  double* out = values;
  for (const ConstraintInfo& c : info_) {
    const int x = c.state;
    if (c.kind == ConstraintKind::kNonNegative) {
      *out++ = -1.0;
      continue;
    }
    if (c.kind == ConstraintKind::kSum) {
      for (int k = 0; k < c.action; ++k) *out++ = 1.0;
      continue;
    }
    const auto& sup = value_support_[x];
    for (std::size_t k = 0; k < sup.size(); ++k) pos[sup[k]] = static_cast<int>(k);
    coef.assign(sup.size(), 0.0);
    coef[pos[x]] = -1.0;
    const int other = 1 - c.player;
    const auto q = pi.at(other, x);
    const int m_other = static_cast<int>(q.size());
    for (int b = 0; b < m_other; ++b) {
      const int a1 = c.player == 0 ? c.action : b;
      const int a2 = c.player == 0 ? b : c.action;
      const double w = beta * q[b];
      if (w == 0.0) continue;
      for (const Transition& t : g.transitions(x, a1, a2)) coef[pos[t.next]] += w * t.prob;
    }
    for (double cf : coef) *out++ = cf;
    const auto joint = [&](int b) {
      return c.player == 0 ? g.joint_index(x, c.action, b) : g.joint_index(x, b, c.action);
    };
    const double last = e[joint(m_other - 1)][c.player];
    for (int b = 0; b + 1 < m_other; ++b) *out++ = e[joint(b)][c.player] - last;
    for (int y : sup) pos[y] = -1;
  }
}

Eigen::SparseMatrix<double> Problem::ConstraintGradients(const Eigen::VectorXd& z) const {
  CheckSize(z);
  Eigen::SparseMatrix<double> g = pattern_;
  FillGradientValues(z, g.valuePtr());
  return g;
}

void Problem::UpdateConstraintGradients(const Eigen::VectorXd& z,
                                        Eigen::SparseMatrix<double>* g) const {
  CheckSize(z);
  Require(g->rows() == pattern_.rows() && g->cols() == pattern_.cols() &&
              g->nonZeros() == pattern_.nonZeros() && g->isCompressed(),
          ErrorCode::kDimensionMismatch, "gradient matrix does not carry the problem pattern");
  FillGradientValues(z, g->valuePtr());
}

ProblemCensus Problem::Census() const {
  ProblemCensus c;
  c.num_states = num_states_;
  c.total_actions = {game_->total_actions(0), game_->total_actions(1)};
  const std::int64_t sum_m = c.total_actions[0] + c.total_actions[1];
  c.full_variables = 2LL * num_states_ + sum_m;
  c.full_constraints = 2 * sum_m;
  c.packed_variables = num_variables_;
  c.packed_constraints = num_constraints();
  return c;
}

ProblemCensus Census(const StochasticGame& game) { return Problem(game).Census(); }

}  // namespace sgnash
