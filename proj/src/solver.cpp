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

#include "sgnash/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sgnash/direction.hpp"
#include "sgnash/error.hpp"
#include "sgnash/feasible_init.hpp"
#include "sgnash/game_io.hpp"
#include "sgnash/step_length.hpp"

namespace sgnash {
namespace {

constexpr const char* kTraceHeader = "iter,f,normS0,normS,t,maxg,active";

void RequireRange(bool ok, const char* field) {
  Require(ok, ErrorCode::kInvalidArgument, std::string("solver option out of range: ") + field);
}

}  // namespace

void ValidateConfig(const SolverConfig& c) {
  RequireRange(c.init_slack > 0.0 && std::isfinite(c.init_slack), "init_slack");
  RequireRange(c.ts_alpha > 0.0 && c.ts_alpha < 1.0, "ts_alpha");
  RequireRange(c.rho0 > 0.0 && std::isfinite(c.rho0), "rho0");
  RequireRange(c.delta0 > 0.0 && c.delta0 < 1.0, "delta0");
  RequireRange(c.eta > 0.0 && c.eta < 1.0, "eta");
  RequireRange(c.nu > 1.0 && std::isfinite(c.nu), "nu");
  RequireRange(c.t_cap > 0.0 && std::isfinite(c.t_cap), "t_cap");
  RequireRange(c.t_min > 0.0 && c.t_min < c.t_cap, "t_min");
  RequireRange(c.tol_s >= 0.0, "tol_s");
  RequireRange(c.tol_f >= 0.0, "tol_f");
  RequireRange(c.max_iters >= 0, "max_iters");
  RequireRange(c.max_seconds >= 0.0 && std::isfinite(c.max_seconds), "max_seconds");
  RequireRange(c.act_tol >= 0.0, "act_tol");
  RequireRange(c.w.size() == 0 || (c.w.array() > 0.0).all(), "w");
}

const char* StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kZeroDirection: return "zero-direction";
    case StopReason::kZeroStep: return "zero-step";
    case StopReason::kMaxIters: return "max-iters";
    case StopReason::kTimeLimit: return "time-limit";
    case StopReason::kObjectiveTolerance: return "objective-tolerance";
    case StopReason::kNumericFailure: return "numeric-failure";
  }
  return "unknown";
}

SolveReport SolveFrom(const Problem& problem, const Eigen::VectorXd& z0,
                      const SolverConfig& config, const IterationCallback& callback) {
  ValidateConfig(config);
  const auto start = std::chrono::steady_clock::now();
  const int n = problem.num_constraints();
  Require(config.w.size() == 0 || config.w.size() == n, ErrorCode::kDimensionMismatch,
          "weight vector length does not match the constraint count");

  SolveReport report;
  Eigen::VectorXd z = z0;
  Eigen::VectorXd g = problem.Constraints(z);
  Require(n == 0 || g.maxCoeff() < 0.0, ErrorCode::kInfeasible,
          "starting point is not strictly feasible");
  double f = problem.Objective(z);
  report.initial_f = f;

  Eigen::SparseMatrix<double> grad_g = problem.ConstraintGradients(z);
  DirectionWorkspace workspace(grad_g);
  DirectionParams dparams;
  dparams.ts_alpha = config.ts_alpha;
  dparams.rho0 = config.rho0;
  dparams.w = config.w.size() ? config.w : Eigen::VectorXd::Ones(n);
  StepParams sparams;
  sparams.delta0 = config.delta0;
  sparams.eta = config.eta;
  sparams.nu = config.nu;
  sparams.t_cap = config.t_cap;
  sparams.t_min = config.t_min;

  int iter = 0;
  for (;;) {
    TraceRow row;
    row.iter = iter;
    row.f = f;
    row.max_g = n ? g.maxCoeff() : -1.0;
    row.active = static_cast<int>((g.array() >= -config.act_tol).count());
    const auto finish = [&](StopReason reason) {
      report.stop = reason;
      report.trace.push_back(row);
      if (callback) callback(row);
    };
    if (f < config.tol_f) {
      finish(StopReason::kObjectiveTolerance);
      break;
    }
    if (iter >= config.max_iters) {
      finish(StopReason::kMaxIters);
      break;
    }
    if (config.max_seconds > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >=
            config.max_seconds) {
      finish(StopReason::kTimeLimit);
      break;
    }
    try {
      const Eigen::VectorXd grad_f = problem.ObjectiveGradient(z);
      problem.UpdateConstraintGradients(z, &grad_g);
      const DirectionResult dir = TwoStageDirection(grad_f, grad_g, g, dparams, &workspace);
      report.gamma = dir.gamma;
      row.norm_s0 = dir.norm_s0;
      row.norm_s = dir.s.norm();
      if (dir.zero || row.norm_s <= config.tol_s * (1.0 + grad_f.norm())) {
        finish(StopReason::kZeroDirection);
        break;
      }
      if (config.check_invariants) {
        const DirectionResiduals res = CheckDirection(dir, grad_f, grad_g, g, dparams.w);
        const double worst = std::max(res.stage1, res.stage2);
        report.invariants.worst_stage_residual =
            std::max(report.invariants.worst_stage_residual, worst);
        if (worst > 1e-6) ++report.invariants.stage_residual;
        if (dir.norm_s0 > 1e-10 && !(dir.s.dot(grad_f) < 0.0)) ++report.invariants.non_descent;
      }
      const StepResult step = OptimalStep(problem, z, dir.s, dir.gamma, grad_f, sparams);
      report.discriminant_violations += step.discriminant_violations;
      if (step.t <= config.t_min) {
        finish(StopReason::kZeroStep);
        break;
      }
      if (step.fallback) ++report.fallback_steps;
      row.t = step.t;
      report.trace.push_back(row);
      if (callback) callback(row);

      z += step.t * dir.s;
      g = problem.Constraints(z);
      const double f_new = step.f_new;
      if (config.check_invariants) {
        if (n && !(g.maxCoeff() < 0.0)) ++report.invariants.infeasible_iterate;
        if (f_new > f + 1e-12 * (1.0 + std::abs(f))) ++report.invariants.objective_increase;
      }
      f = f_new;
      ++iter;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNumeric) throw;
      report.message = e.what();
      finish(StopReason::kNumericFailure);
      break;
    }
  }

  report.z = z;
  report.v = problem.UnpackValues(z);
  report.pi = problem.UnpackStrategy(z);
  report.f = f;
  report.epsilon = std::max(0.0, f) / (1.0 - problem.game().discount());
  report.iterations = iter;
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SolveReport Solve(const StochasticGame& game, const SolverConfig& config,
                  const IterationCallback& callback) {
  ValidateConfig(config);
  const Problem problem(game);
  const auto start = std::chrono::steady_clock::now();
  const Eigen::VectorXd z0 = InitialPoint(problem, config.init_slack);
  SolveReport report = SolveFrom(problem, z0, config, callback);
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string TraceToCsv(const std::vector<TraceRow>& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  char buf[256];
  for (const TraceRow& r : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.iter, r.f,
                  r.norm_s0, r.norm_s, r.t, r.max_g, r.active);
    out += buf;
  }
  return out;
}

std::vector<TraceRow> TraceFromCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)) && line == kTraceHeader,
          ErrorCode::kInvalidArgument, "trace CSV header mismatch");
  std::vector<TraceRow> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRow r;
    const int got = std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf,%d", &r.iter, &r.f,
                                &r.norm_s0, &r.norm_s, &r.t, &r.max_g, &r.active);
    Require(got == 7, ErrorCode::kInvalidArgument, "malformed trace row: " + line);
    out.push_back(r);
  }
  return out;
}

void ExportTrace(const SolveReport& report, const std::string& path) {
  WriteTextFile(path, TraceToCsv(report.trace));
}

}  // namespace sgnash
