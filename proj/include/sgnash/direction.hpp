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

#ifndef SGNASH_DIRECTION_HPP_
#define SGNASH_DIRECTION_HPP_

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sgnash/sparse_ldl.hpp"

namespace sgnash {

struct DirectionParams {
  double ts_alpha = 0.5;
  double rho0 = 0.9;
  Eigen::VectorXd w;  // Per-constraint weights; empty means all ones.
};

struct DirectionResult {
  Eigen::VectorXd s0;
  Eigen::VectorXd s;
  Eigen::VectorXd gamma0;
  Eigen::VectorXd gamma;
  double rho_used = 0.0;
  double norm_s0 = 0.0;
  bool zero = false;  // ||S0|| <= 1e-9 (1 + ||grad f||); s is then zero.
};

// Reusable state across iterations: the H pattern and its symbolic analysis
// depend only on the pattern of G.
struct DirectionWorkspace {
  explicit DirectionWorkspace(const Eigen::SparseMatrix<double>& g_pattern,
                              Ordering ordering = Ordering::kAmd)
      : assembler(g_pattern), h(assembler.pattern()), ldl(ordering) {}
  HAssembler assembler;
  SymmetricLower h;
  LdlFactorization ldl;
};

// Two-stage feasible direction. With H = G^T G - diag(w .* g):
//   H gamma0 = -G^T grad_f,                   S0 = -(grad_f + G gamma0),
//   H gamma  = -G^T grad_f + rho ||S0||^2 1,  S  = -(grad_f + G gamma).
// One factorization of H serves both solves. Requires g < 0 componentwise.
DirectionResult TwoStageDirection(const Eigen::VectorXd& grad_f,
                                  const Eigen::SparseMatrix<double>& grad_g,
                                  const Eigen::VectorXd& g, const DirectionParams& params,
                                  DirectionWorkspace* workspace);
DirectionResult TwoStageDirection(const Eigen::VectorXd& grad_f,
                                  const Eigen::SparseMatrix<double>& grad_g,
                                  const Eigen::VectorXd& g, const DirectionParams& params);

// Residuals of the defining conditions, each divided by its scale
// 1 + ||S0|| ||grad g_j|| + |w_j gamma_j g_j| (maximum over j):
//   stage1: S0^T grad g_j + w_j gamma0_j g_j
//   stage2: S^T grad g_j + w_j gamma_j g_j + rho ||S0||^2
// and the unscaled infinity norms of S0 + grad_f + G gamma0 and its stage-2
// counterpart.
struct DirectionResiduals {
  double stage1 = 0.0;
  double stage2 = 0.0;
  double stationarity1 = 0.0;
  double stationarity2 = 0.0;
};
DirectionResiduals CheckDirection(const DirectionResult& d, const Eigen::VectorXd& grad_f,
                                  const Eigen::SparseMatrix<double>& grad_g,
                                  const Eigen::VectorXd& g, const Eigen::VectorXd& w);

}  // namespace sgnash

#endif  // SGNASH_DIRECTION_HPP_
