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

#include "sgnash/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "sgnash/error.hpp"
#include "sgnash/feasible_init.hpp"
#include "sgnash/sparse_ldl.hpp"

namespace sgnash {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> Subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Solves [M -1; 1^T 0][p; u] = [0; 1]. Returns false when singular.
bool Indifference(const Eigen::MatrixXd& m, Eigen::VectorXd* p, double* u) {
  const int k = static_cast<int>(m.rows());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, k + 1);
  a.topLeftCorner(k, k) = m;
  a.topRightCorner(k, 1).setConstant(-1.0);
  a.bottomLeftCorner(1, k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  if (lu.rank() < k + 1) return false;
  const Eigen::VectorXd sol = lu.solve(rhs);
  *p = sol.head(k);
  *u = sol[k];
  return true;
}

}  // namespace

KktReport KktResidual(const Problem& problem, const Eigen::VectorXd& z,
                      const Eigen::VectorXd& lambda, double act_tol) {
  Require(lambda.size() == problem.num_constraints(), ErrorCode::kDimensionMismatch,
          "multiplier length does not match the constraint count");
  const Eigen::VectorXd grad = problem.ObjectiveGradient(z);
  const Eigen::SparseMatrix<double> gmat = problem.ConstraintGradients(z);
  const Eigen::VectorXd g = problem.Constraints(z);
  KktReport out;
  out.grad_norm = grad.norm();
  out.stationarity = (grad + gmat * lambda).lpNorm<Eigen::Infinity>();
  if (g.size() > 0) {
    out.complementarity = lambda.cwiseProduct(g).lpNorm<Eigen::Infinity>();
    out.primal = g.maxCoeff();
    out.dual = lambda.minCoeff();
  }
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    if (std::abs(g[j]) <= act_tol) out.active.push_back(static_cast<int>(j));
  }
  return out;
}

Eigen::VectorXd LambdaPrime(const Problem& problem, const Eigen::VectorXd& z) {
  const StochasticGame& game = problem.game();
  const Eigen::VectorXd h = problem.ValueConstraints(z);
  const JointStrategy pi = problem.UnpackStrategy(z);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(problem.num_constraints());
  for (int i = 0; i < kNumPlayers; ++i) {
    for (int x = 0; x < game.num_states(); ++x) {
      const auto row = pi.at(i, x);
      for (int a = 0; a < game.num_actions(i, x); ++a) {
        const int jv = problem.value_constraint(i, x, a);
        out[jv] = -row[a];
        const int jp = problem.probability_constraint(i, x, a);
        if (jp >= 0) out[jp] = h[jv];
      }
    }
  }
  return out;
}

const char* KktnVerdictName(KktnVerdict verdict) {
  switch (verdict) {
    case KktnVerdict::kKktN: return "KKT-N";
    case KktnVerdict::kDegenerate: return "degenerate";
    case KktnVerdict::kActiveGradientsDependent: return "active-gradients-dependent";
    case KktnVerdict::kUndetermined: return "undetermined";
  }
  return "unknown";
}

KktnReport KktnCheck(const Problem& problem, const Eigen::VectorXd& z, double act_tol,
                     double dense_limit) {
  const Eigen::VectorXd g = problem.Constraints(z);
  const Eigen::VectorXd lp = LambdaPrime(problem, z);
  const Eigen::SparseMatrix<double> gmat = problem.ConstraintGradients(z);
  const int n = problem.num_constraints();
  const int nv = problem.num_variables();
  std::vector<int> active;
  std::vector<int> inactive;
  for (int j = 0; j < n; ++j) (std::abs(g[j]) <= act_tol ? active : inactive).push_back(j);

  KktnReport out;
  out.num_active = static_cast<int>(active.size());
  out.num_inactive = static_cast<int>(inactive.size());
  double lk = 0.0;
  for (int j : inactive) lk += lp[j] * lp[j];
  out.lambda_prime_inactive = std::sqrt(lk);

  const bool dense = static_cast<double>(nv) * n <= dense_limit;
  if (!dense) {
    // Rank of G_I from a sparse LDL^T of G_I^T G_I.
    bool independent = true;
    if (!active.empty()) {
      std::vector<Eigen::Triplet<double>> trips;
      for (int c = 0; c < out.num_active; ++c) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(gmat, active[c]); it; ++it) {
          trips.emplace_back(static_cast<int>(it.row()), c, it.value());
        }
      }
      Eigen::SparseMatrix<double> gi(nv, out.num_active);
      gi.setFromTriplets(trips.begin(), trips.end());
      const Eigen::VectorXd zero_g = Eigen::VectorXd::Zero(out.num_active);
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(out.num_active);
      const SymmetricLower gram = BuildH(gi, zero_g, ones);
      LdlFactorization ldl;
      try {
        ldl.Factorize(gram);
        independent = ldl.small_pivots().empty();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNumeric) throw;
        independent = false;
      }
    }
    if (!independent) {
      out.verdict = KktnVerdict::kActiveGradientsDependent;
      out.note = "active constraint gradients are linearly dependent";
    } else if (out.num_inactive > nv - out.num_active) {
      out.verdict = KktnVerdict::kDegenerate;
      out.decided_by_dimension = true;
      out.note = "more inactive constraints than the complement of the active span";
    } else {
      out.verdict = KktnVerdict::kUndetermined;
      out.note = "problem too large for the dense rank test";
    }
    return out;
  }

  const Eigen::MatrixXd full = Eigen::MatrixXd(gmat);
  Eigen::MatrixXd gi(nv, out.num_active);
  for (int c = 0; c < out.num_active; ++c) gi.col(c) = full.col(active[c]);
  Eigen::MatrixXd gk(nv, out.num_inactive);
  for (int c = 0; c < out.num_inactive; ++c) gk.col(c) = full.col(inactive[c]);

  Eigen::MatrixXd projected = gk;
  if (out.num_active > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gi);
    qr.setThreshold(100.0 * kEps * std::max(nv, out.num_active));
    if (qr.rank() < out.num_active) {
      out.verdict = KktnVerdict::kActiveGradientsDependent;
      out.note = "active constraint gradients are linearly dependent";
      return out;
    }
    const Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(nv, out.num_active);
    projected -= q * (q.transpose() * gk);
  }
  if (out.num_inactive > nv - out.num_active) out.decided_by_dimension = true;
  if (out.num_inactive == 0) {
    out.verdict = KktnVerdict::kKktN;
    return out;
  }
  const Eigen::MatrixXd gprime = projected.transpose() * projected;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gprime, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig.eigenvalues();
  out.min_eigenvalue = ev.minCoeff();
  out.max_singular = ev.cwiseAbs().maxCoeff();
  out.min_singular = ev.cwiseAbs().minCoeff();
  // Measured against G_K before projection, so that a projection which
  // annihilates G_K reads as rank zero rather than as scaled rounding noise.
  const double threshold =
      gk.squaredNorm() * std::max(nv, out.num_inactive) * kEps * 100.0;
  out.rank = static_cast<int>((ev.array().abs() > threshold).count());
  out.verdict = out.rank == out.num_inactive ? KktnVerdict::kKktN : KktnVerdict::kDegenerate;
  return out;
}

BestResponse BestResponseValue(const StochasticGame& game, const JointStrategy& strategy,
                               int player, double tol) {
  Require(player == 0 || player == 1, ErrorCode::kInvalidArgument, "player must be 0 or 1");
  const auto violations = ValidateStrategy(game, strategy);
  Require(violations.empty(), ErrorCode::kInvalidArgument,
          violations.empty() ? "" : "invalid strategy: " + violations.front());
  // Rows e_x - beta P(.|x, a, pi^-i) and expected rewards per own action.
  const LpProblem lp = ValueConstraintLp(game, strategy, player, 0.0);
  const int s = game.num_states();
  const double beta = game.discount();
  std::vector<int> row_state;
  for (int x = 0; x < s; ++x) {
    for (int a = 0; a < game.num_actions(player, x); ++a) row_state.push_back(x);
  }
  BestResponse out;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(s);
  Eigen::VectorXd next(s);
  const auto backup = [&](const Eigen::VectorXd& cur, Eigen::VectorXd* nv,
                          std::vector<int>* policy) {
    const Eigen::VectorXd av = lp.rows * cur;
    nv->setConstant(-std::numeric_limits<double>::infinity());
    if (policy) policy->assign(s, 0);
    std::vector<int> action(s, 0);
    for (int r = 0; r < static_cast<int>(row_state.size()); ++r) {
      const int x = row_state[r];
      const double q = lp.lower[r] + cur[x] - av[r];
      if (q > (*nv)[x]) {
        (*nv)[x] = q;
        if (policy) (*policy)[x] = action[x];
      }
      ++action[x];
    }
  };
  const int max_iters = 1000000;
  for (int k = 0; k < max_iters; ++k) {
    backup(v, &next, nullptr);
    ++out.iterations;
    const Eigen::VectorXd diff = next - v;
    const double hi = diff.maxCoeff();
    const double lo = diff.minCoeff();
    v = next;
    if (beta == 0.0) break;
    if (hi - lo < tol) {
      v.array() += beta / (1.0 - beta) * 0.5 * (hi + lo);
      break;
    }
  }
  out.value = v;
  backup(v, &next, &out.policy);
  return out;
}

EpsCertificate EpsNashCertify(const StochasticGame& game, const JointStrategy& strategy,
                              double bound, double slack) {
  const ValueVector v = StrategyValue(game, strategy);
  EpsCertificate out;
  out.bound = bound;
  out.eps_emp = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kNumPlayers; ++i) {
    const BestResponse br = BestResponseValue(game, strategy, i);
    out.per_player[i] = (br.value - v[i]).maxCoeff();
    out.eps_emp = std::max(out.eps_emp, out.per_player[i]);
  }
  out.passed = out.eps_emp <= bound + slack;
  return out;
}

SupportEnumeration SupportEnumerationNash(const Eigen::MatrixXd& r1, const Eigen::MatrixXd& r2,
                                          double tol) {
  Require(r1.rows() == r2.rows() && r1.cols() == r2.cols(), ErrorCode::kDimensionMismatch,
          "payoff matrices must share a shape");
  const int m = static_cast<int>(r1.rows());
  const int n = static_cast<int>(r1.cols());
  Require(m >= 1 && n >= 1 && m <= 5 && n <= 5, ErrorCode::kInvalidArgument,
          "support enumeration handles games up to 5x5");
  SupportEnumeration out;
  for (int k = 1; k <= std::min(m, n); ++k) {
    for (const auto& rows : Subsets(m, k)) {
      for (const auto& cols : Subsets(n, k)) {
        Eigen::MatrixXd a(k, k);
        Eigen::MatrixXd bt(k, k);
        for (int p = 0; p < k; ++p) {
          for (int q = 0; q < k; ++q) {
            a(p, q) = r1(rows[p], cols[q]);
            bt(q, p) = r2(rows[p], cols[q]);
          }
        }
        Eigen::VectorXd ys;
        Eigen::VectorXd xs;
        double u = 0.0;
        double w = 0.0;
        // y makes player 0 indifferent on rows; x makes player 1 indifferent.
        const bool ok_y = Indifference(a, &ys, &u);
        const bool ok_x = Indifference(bt, &xs, &w);
        if (!ok_y || !ok_x) {
          out.degenerate = true;
          continue;
        }
        if (ys.minCoeff() < -tol || xs.minCoeff() < -tol) continue;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (int p = 0; p < k; ++p) {
          x[rows[p]] = std::max(0.0, xs[p]);
          y[cols[p]] = std::max(0.0, ys[p]);
        }
        x /= x.sum();
        y /= y.sum();
        const Eigen::VectorXd pay1 = r1 * y;
        const Eigen::VectorXd pay2 = r2.transpose() * x;
        const double scale1 = 1.0 + r1.cwiseAbs().maxCoeff();
        const double scale2 = 1.0 + r2.cwiseAbs().maxCoeff();
        if (pay1.maxCoeff() > u + tol * scale1 || pay2.maxCoeff() > w + tol * scale2) continue;
        const int br1 = static_cast<int>((pay1.array() >= u - tol * scale1).count());
        const int br2 = static_cast<int>((pay2.array() >= w - tol * scale2).count());
        if (br1 > k || br2 > k || xs.minCoeff() <= tol || ys.minCoeff() <= tol) {
          out.degenerate = true;
        }
        bool duplicate = false;
        for (const auto& eq : out.equilibria) {
          if ((eq.x - x).lpNorm<Eigen::Infinity>() < 1e-7 &&
              (eq.y - y).lpNorm<Eigen::Infinity>() < 1e-7) {
            duplicate = true;
          }
        }
        if (!duplicate) out.equilibria.push_back({x, y});
      }
    }
  }
  return out;
}

}  // namespace sgnash
