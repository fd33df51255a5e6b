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

#include "sgnash/feasible_init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/LU>

#include "sgnash/error.hpp"

namespace sgnash {
namespace {

constexpr double kReducedCostTol = 1e-10;
constexpr double kPivotTol = 1e-10;
constexpr int kRefactorEvery = 64;

// Revised simplex on  A v + x0 1 - s = b,  x0, s >= 0,  v free.
//
// The basis is represented by its kernel: R lists the rows whose slack is
// nonbasic, C the basic structural columns (v indices and x0 = n), and
// K = A'[R, C] is square, where A' = [A | 1]. Basic slacks are recovered
// from the structurals, so only K^{-1} is stored.
class PhaseOne {
 public:
  explicit PhaseOne(const LpProblem& lp)
      : a_(lp.rows), at_(lp.rows), b_(lp.lower), m_(static_cast<int>(lp.rows.rows())),
        n_(static_cast<int>(lp.rows.cols())) {
    at_.makeCompressed();
    row_pos_.assign(m_, -1);
    col_pos_.assign(n_ + 1, -1);
    xs_ = Eigen::VectorXd::Zero(n_ + 1);
    s_ = -b_;
  }

  LpSolution Run() {
    LpSolution out;
    scale_ = std::max(1.0, b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0);
    Eigen::Index start = 0;
    if (m_ == 0 || b_.maxCoeff(&start) <= 0.0) {
      out.x = Eigen::VectorXd::Zero(n_);
      return out;
    }
    // Chvatal's start: x0 enters, the most violated row leaves.
    xs_[n_] = b_[start];
    s_ = Eigen::VectorXd::Constant(m_, b_[start]) - b_;
    s_[start] = 0.0;
    R_ = {static_cast<int>(start)};
    C_ = {n_};
    row_pos_[start] = 0;
    col_pos_[n_] = 0;
    kinv_ = Eigen::MatrixXd::Ones(1, 1);
    ++out.pivots;

    const long max_pivots = 50L * (m_ + n_ + 10);
    while (col_pos_[n_] >= 0 && xs_[n_] > 1e-13 * scale_) {
      Require(out.pivots < max_pivots, ErrorCode::kNumeric,
              "phase-one simplex exceeded its pivot budget");
      if (!Pivot()) break;
      ++out.pivots;
    }
    out.x = xs_.head(n_);
    const Eigen::VectorXd resid = a_ * out.x - b_;
    const double worst = m_ ? -resid.minCoeff() : 0.0;
    Require(worst <= 1e-9 * scale_, ErrorCode::kInfeasible,
            "inequality system is infeasible (auxiliary optimum " +
                std::to_string(worst) + ")");
    return out;
  }

 private:
  // A'[r, C] as a dense vector over kernel positions.
  Eigen::VectorXd KernelRow(int r) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(C_.size()));
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a_, r); it; ++it) {
      const int q = col_pos_[it.col()];
      if (q >= 0) out[q] = it.value();
    }
    if (col_pos_[n_] >= 0) out[col_pos_[n_]] = 1.0;
    return out;
  }

  void Refactor() {
    const int k = static_cast<int>(R_.size());
    Eigen::MatrixXd kmat(k, k);
    for (int p = 0; p < k; ++p) kmat.row(p) = KernelRow(R_[p]).transpose();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(kmat);
    kinv_ = lu.inverse();
    updates_ = 0;
    Eigen::VectorXd b_r(k);
    for (int p = 0; p < k; ++p) b_r[p] = b_[R_[p]];
    const Eigen::VectorXd x_c = kinv_ * b_r;
    xs_.setZero();
    for (int q = 0; q < k; ++q) xs_[C_[q]] = x_c[q];
    s_ = a_ * xs_.head(n_) + Eigen::VectorXd::Constant(m_, xs_[n_]) - b_;
    for (int r : R_) s_[r] = 0.0;
  }

  // One Bland pivot. Returns false at the phase-one optimum.
  bool Pivot() {
    const int k = static_cast<int>(R_.size());
    // Duals: y^T K = c_C with c = e_{x0}.
    const Eigen::VectorXd y = kinv_.row(col_pos_[n_]).transpose();
    Eigen::VectorXd y_full = Eigen::VectorXd::Zero(m_);
    for (int p = 0; p < k; ++p) y_full[R_[p]] = y[p];
    const Eigen::VectorXd aty = a_.transpose() * y_full;

    int enter_col = -1;
    int enter_row = -1;
    double sigma = 1.0;
    for (int j = 0; j < n_; ++j) {
      if (col_pos_[j] >= 0) continue;
      const double d = -aty[j];
      if (std::abs(d) > kReducedCostTol) {
        enter_col = j;
        sigma = d < 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    if (enter_col < 0) {
      int best = std::numeric_limits<int>::max();
      for (int p = 0; p < k; ++p) {
        if (y[p] < -kReducedCostTol && R_[p] < best) best = R_[p];
      }
      if (best == std::numeric_limits<int>::max()) return false;
      enter_row = best;
    }

    // w = K^{-1} a_R for the entering column a.
    Eigen::VectorXd w(k);
    Eigen::VectorXd a_rows = Eigen::VectorXd::Zero(m_);
    if (enter_col >= 0) {
      Eigen::VectorXd a_r = Eigen::VectorXd::Zero(k);
      for (Eigen::SparseMatrix<double, Eigen::ColMajor>::InnerIterator it(at_, enter_col); it;
           ++it) {
        a_rows[it.row()] = it.value();
        if (row_pos_[it.row()] >= 0) a_r[row_pos_[it.row()]] = it.value();
      }
      w = kinv_ * a_r;
    } else {
      w = -kinv_.col(row_pos_[enter_row]);
    }
    Eigen::VectorXd w_full = Eigen::VectorXd::Zero(n_ + 1);
    for (int q = 0; q < k; ++q) w_full[C_[q]] = w[q];
    const Eigen::VectorXd ws = a_ * w_full.head(n_) +
                               Eigen::VectorXd::Constant(m_, w_full[n_]) - a_rows;

    // Ratio test; ties go to the smallest index, and x0 precedes every slack.
    double best_ratio = std::numeric_limits<double>::infinity();
    int leave_row = -1;
    bool leave_x0 = false;
    const double rate_x0 = sigma * w[col_pos_[n_]];
    if (rate_x0 > kPivotTol) {
      best_ratio = xs_[n_] / rate_x0;
      leave_x0 = true;
    }
    for (int r = 0; r < m_; ++r) {
      if (row_pos_[r] >= 0) continue;
      const double rate = sigma * ws[r];
      if (rate <= kPivotTol) continue;
      const double ratio = std::max(0.0, s_[r]) / rate;
      if (ratio < best_ratio * (1.0 - 1e-12) - 1e-300) {
        best_ratio = ratio;
        leave_row = r;
        leave_x0 = false;
      }
    }
    Require(leave_x0 || leave_row >= 0, ErrorCode::kInternal,
            "phase-one simplex met an unbounded ray");
    const double t = std::max(0.0, best_ratio);

    for (int q = 0; q < k; ++q) xs_[C_[q]] -= sigma * t * w[q];
    for (int r = 0; r < m_; ++r) {
      if (row_pos_[r] < 0) s_[r] -= sigma * t * ws[r];
    }
    if (enter_col >= 0) {
      xs_[enter_col] += sigma * t;
    } else {
      s_[enter_row] = t;
    }

    if (leave_x0) {
      // The auxiliary variable hits zero: the structurals are feasible.
      xs_[n_] = 0.0;
      return false;
    }
    s_[leave_row] = 0.0;
    if (enter_col >= 0) {
      // The kernel grows by row leave_row and column enter_col.
      row_pos_[leave_row] = static_cast<int>(R_.size());
      R_.push_back(leave_row);
      col_pos_[enter_col] = static_cast<int>(C_.size());
      C_.push_back(enter_col);
      Refactor();
      return true;
    }
    // Row replacement: enter_row's slack becomes basic, leave_row's nonbasic.
    const int p = row_pos_[enter_row];
    const Eigen::VectorXd z = kinv_.transpose() * KernelRow(leave_row);
    const double denom = z[p];
    R_[p] = leave_row;
    row_pos_[leave_row] = p;
    row_pos_[enter_row] = -1;
    if (std::abs(denom) < 1e-12 || ++updates_ >= kRefactorEvery) {
      Refactor();
    } else {
      Eigen::VectorXd v = z;
      v[p] -= 1.0;
      const Eigen::VectorXd col = kinv_.col(p);
      kinv_.noalias() -= col * (v.transpose() / denom);
    }
    return true;
  }

  Eigen::SparseMatrix<double, Eigen::RowMajor> a_;
  Eigen::SparseMatrix<double, Eigen::ColMajor> at_;
  Eigen::VectorXd b_;
  int m_;
  int n_;
  double scale_ = 1.0;
  std::vector<int> R_;
  std::vector<int> C_;
  std::vector<int> row_pos_;
  std::vector<int> col_pos_;
  Eigen::MatrixXd kinv_;
  Eigen::VectorXd xs_;
  Eigen::VectorXd s_;
  int updates_ = 0;
};

}  // namespace

LpSolution PhaseOneSimplex(const LpProblem& lp) {
  Require(lp.lower.size() == lp.rows.rows(), ErrorCode::kDimensionMismatch,
          "LP bound vector does not match the row count");
  Require(lp.lower.allFinite(), ErrorCode::kInvalidArgument, "LP bounds must be finite");
  PhaseOne solver(lp);
  return solver.Run();
}

LpProblem ValueConstraintLp(const StochasticGame& game, const JointStrategy& pi,
                            int player, double slack) {
  Require(player == 0 || player == 1, ErrorCode::kInvalidArgument, "player must be 0 or 1");
  Require(pi.MatchesShape(game), ErrorCode::kDimensionMismatch,
          "strategy shape does not match the game");
  const int s = game.num_states();
  const double beta = game.discount();
  const int other = 1 - player;
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> lower;
  std::vector<double> coef(s, 0.0);
  std::vector<int> touched;
  int row = 0;
  for (int x = 0; x < s; ++x) {
    const auto q = pi.at(other, x);
    for (int a = 0; a < game.num_actions(player, x); ++a) {
      double r = 0.0;
      touched.clear();
      for (int b = 0; b < game.num_actions(other, x); ++b) {
        const int a1 = player == 0 ? a : b;
        const int a2 = player == 0 ? b : a;
        r += q[b] * game.reward(player, x, a1, a2);
        for (const Transition& t : game.transitions(x, a1, a2)) {
          if (coef[t.next] == 0.0) touched.push_back(t.next);
          coef[t.next] -= beta * q[b] * t.prob;
        }
      }
      if (coef[x] == 0.0) touched.push_back(x);
      coef[x] += 1.0;
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (int y : touched) {
        if (coef[y] != 0.0) trips.emplace_back(row, y, coef[y]);
        coef[y] = 0.0;
      }
      lower.push_back(r + slack);
      ++row;
    }
  }
  LpProblem lp;
  lp.rows.resize(row, s);
  lp.rows.setFromTriplets(trips.begin(), trips.end());
  lp.rows.makeCompressed();
  lp.lower = Eigen::Map<const Eigen::VectorXd>(lower.data(), row);
  lp.cost = Eigen::VectorXd::Ones(s);
  return lp;
}

Eigen::VectorXd InitialPoint(const Problem& problem, double slack) {
  Require(slack > 0.0 && std::isfinite(slack), ErrorCode::kInvalidArgument,
          "interior slack must be positive");
  const StochasticGame& game = problem.game();
  const JointStrategy pi = UniformStrategy(game);
  ValueVector v;
  for (int i = 0; i < kNumPlayers; ++i) {
    v[i] = PhaseOneSimplex(ValueConstraintLp(game, pi, i, slack)).x;
  }
  return problem.Pack(v, pi);
}

}  // namespace sgnash
