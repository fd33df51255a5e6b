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

#ifndef SGNASH_DIAGNOSTICS_HPP_
#define SGNASH_DIAGNOSTICS_HPP_

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sgnash/game.hpp"
#include "sgnash/nlp.hpp"

namespace sgnash {

// Optimality conditions with g <= 0, lambda >= 0 and
// grad f + sum_j lambda_j grad g_j = 0.
struct KktReport {
  double stationarity = 0.0;     // ||grad f + G lambda||_inf
  double complementarity = 0.0;  // max |lambda_j g_j|
  double primal = 0.0;           // max g_j
  double dual = 0.0;             // min lambda_j
  double grad_norm = 0.0;        // ||grad f||_2
  std::vector<int> active;       // |g_j| <= act_tol
};

KktReport KktResidual(const Problem& problem, const Eigen::VectorXd& z,
                      const Eigen::VectorXd& lambda, double act_tol = 1e-6);

// Coefficients with grad f = G lambda'. Value constraint (i, x, a) gets
// -pi^i(x, a); its paired probability constraint gets h_i(x, a). With the
// g <= 0 orientation used here the probability entries carry the sign of h
// itself, and lambda = -lambda' at a Nash point.
Eigen::VectorXd LambdaPrime(const Problem& problem, const Eigen::VectorXd& z);

enum class KktnVerdict {
  kKktN,
  kDegenerate,
  kActiveGradientsDependent,  // G_I lacks full column rank
  kUndetermined,              // too large for the dense rank test
};
const char* KktnVerdictName(KktnVerdict verdict);

struct KktnReport {
  KktnVerdict verdict = KktnVerdict::kUndetermined;
  int num_active = 0;
  int num_inactive = 0;
  int rank = 0;                       // numerical rank of G'
  double min_singular = 0.0;          // smallest singular value of G'
  double max_singular = 0.0;
  double min_eigenvalue = 0.0;        // PSD check, >= -1e-9 expected
  double lambda_prime_inactive = 0.0; // ||lambda'_K||_2
  bool decided_by_dimension = false;  // |K| > N - |I|
  std::string note;
};

// Splits constraints into active I (|g_j| <= act_tol) and inactive K, and
// tests G' = G_K^T (I - G_I (G_I^T G_I)^{-1} G_I^T) G_K for full rank.
// Dense linear algebra is used when N * n <= dense_limit entries.
KktnReport KktnCheck(const Problem& problem, const Eigen::VectorXd& z, double act_tol = 1e-6,
                     double dense_limit = 5e7);

struct BestResponse {
  Eigen::VectorXd value;
  std::vector<int> policy;
  int iterations = 0;
};

// Optimal value of `player` against the opponent's fixed strategy in
// `strategy`, by value iteration stopped when the span of successive
// differences drops below tol, with the midpoint extrapolation applied.
BestResponse BestResponseValue(const StochasticGame& game, const JointStrategy& strategy,
                               int player, double tol = 1e-10);

struct EpsCertificate {
  double eps_emp = 0.0;  // max_i max_x (best response - v_pi)
  std::array<double, 2> per_player{0.0, 0.0};
  double bound = 0.0;
  bool passed = false;
};

// eps_emp from best responses against strategy_value(pi); passes when
// eps_emp <= bound + slack.
EpsCertificate EpsNashCertify(const StochasticGame& game, const JointStrategy& strategy,
                              double bound, double slack = 1e-6);

struct BimatrixEquilibrium {
  Eigen::VectorXd x;  // Row player's mixed strategy.
  Eigen::VectorXd y;  // Column player's mixed strategy.
};

struct SupportEnumeration {
  std::vector<BimatrixEquilibrium> equilibria;
  bool degenerate = false;
};

// All equilibria found over equal-size support pairs. Sets `degenerate` when
// a candidate has more pure best responses than its support size or an
// indifference system is singular. Matrices are indexed [row][column].
SupportEnumeration SupportEnumerationNash(const Eigen::MatrixXd& r1, const Eigen::MatrixXd& r2,
                                          double tol = 1e-9);

}  // namespace sgnash

#endif  // SGNASH_DIAGNOSTICS_HPP_
