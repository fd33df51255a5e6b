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

#include "sgnash/direction.hpp"

#include <algorithm>
#include <cmath>

#include "sgnash/error.hpp"

namespace sgnash {
namespace {

Eigen::VectorXd Weights(const DirectionParams& params, Eigen::Index n) {
  if (params.w.size() == 0) return Eigen::VectorXd::Ones(n);
  Require(params.w.size() == n, ErrorCode::kDimensionMismatch,
          "weight vector length does not match the constraint count");
  Require((params.w.array() > 0.0).all(), ErrorCode::kInvalidArgument,
          "weights must be positive");
  return params.w;
}

}  // namespace

DirectionResult TwoStageDirection(const Eigen::VectorXd& grad_f,
                                  const Eigen::SparseMatrix<double>& grad_g,
                                  const Eigen::VectorXd& g, const DirectionParams& params,
                                  DirectionWorkspace* ws) {
  Require(grad_g.rows() == grad_f.size() && grad_g.cols() == g.size(),
          ErrorCode::kDimensionMismatch, "direction inputs disagree on dimensions");
  Require(params.ts_alpha > 0.0 && params.ts_alpha < 1.0, ErrorCode::kInvalidArgument,
          "ts_alpha must lie in (0, 1)");
  Require(params.rho0 > 0.0, ErrorCode::kInvalidArgument, "rho0 must be positive");
  Require(g.size() == 0 || g.maxCoeff() < 0.0, ErrorCode::kInvalidArgument,
          "direction requires a strictly feasible point");
  const Eigen::VectorXd w = Weights(params, g.size());

  ws->assembler.BuildInto(grad_g, g, w, &ws->h);
  ws->ldl.Factorize(ws->h);

  DirectionResult out;
  const Eigen::VectorXd rhs = -(grad_g.transpose() * grad_f);
  out.gamma0 = ws->ldl.Solve(rhs);
  out.s0 = -(grad_f + grad_g * out.gamma0);
  out.norm_s0 = out.s0.norm();
  if (out.norm_s0 <= 1e-9 * (1.0 + grad_f.norm())) {
    out.zero = true;
    out.s = Eigen::VectorXd::Zero(grad_f.size());
    out.gamma = out.gamma0;
    out.rho_used = params.rho0;
    return out;
  }
  double rho = params.rho0;
  const double sum_gamma0 = out.gamma0.sum();
  if (sum_gamma0 > 0.0) {
    const double rho1 = (1.0 - params.ts_alpha) / sum_gamma0;
    if (rho1 < rho) rho = rho1 / 2.0;
  }
  out.rho_used = rho;
  const Eigen::VectorXd rhs2 =
      rhs + Eigen::VectorXd::Constant(g.size(), rho * out.norm_s0 * out.norm_s0);
  out.gamma = ws->ldl.Solve(rhs2);
  out.s = -(grad_f + grad_g * out.gamma);
  return out;
}

DirectionResult TwoStageDirection(const Eigen::VectorXd& grad_f,
                                  const Eigen::SparseMatrix<double>& grad_g,
                                  const Eigen::VectorXd& g, const DirectionParams& params) {
  DirectionWorkspace ws(grad_g);
  return TwoStageDirection(grad_f, grad_g, g, params, &ws);
}

DirectionResiduals CheckDirection(const DirectionResult& d, const Eigen::VectorXd& grad_f,
                                  const Eigen::SparseMatrix<double>& grad_g,
                                  const Eigen::VectorXd& g, const Eigen::VectorXd& w) {
  DirectionResiduals out;
  out.stationarity1 = (d.s0 + grad_f + grad_g * d.gamma0).lpNorm<Eigen::Infinity>();
  if (d.zero) return out;
  out.stationarity2 = (d.s + grad_f + grad_g * d.gamma).lpNorm<Eigen::Infinity>();
  const Eigen::VectorXd s0g = grad_g.transpose() * d.s0;
  const Eigen::VectorXd sg = grad_g.transpose() * d.s;
  const double shift = d.rho_used * d.norm_s0 * d.norm_s0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double col_norm = grad_g.col(j).norm();
    const double r1 = s0g[j] + w[j] * d.gamma0[j] * g[j];
    const double r2 = sg[j] + w[j] * d.gamma[j] * g[j] + shift;
    const double scale1 = 1.0 + d.norm_s0 * col_norm + std::abs(w[j] * d.gamma0[j] * g[j]);
    const double scale2 = 1.0 + d.s.norm() * col_norm + std::abs(w[j] * d.gamma[j] * g[j]) +
                          shift;
    out.stage1 = std::max(out.stage1, std::abs(r1) / scale1);
    out.stage2 = std::max(out.stage2, std::abs(r2) / scale2);
  }
  return out;
}

}  // namespace sgnash
