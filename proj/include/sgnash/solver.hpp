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

#ifndef SGNASH_SOLVER_HPP_
#define SGNASH_SOLVER_HPP_

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sgnash/game.hpp"
#include "sgnash/nlp.hpp"

namespace sgnash {

struct SolverConfig {
  double init_slack = 0.5;
  double ts_alpha = 0.5;
  double rho0 = 0.9;
  Eigen::VectorXd w;  // Empty means w_j = 1.
  double delta0 = 0.9;
  double eta = 0.1;
  double nu = 2.0;
  double t_cap = 1e6;
  double t_min = 1e-14;
  double tol_s = 1e-8;
  double tol_f = 1e-10;
  int max_iters = 10000;
  // Wall-clock limit for the iteration loop in seconds; 0 means none.
  double max_seconds = 0.0;
  // Active-set threshold used for the trace column.
  double act_tol = 1e-6;
  // Re-verify the direction and step invariants every iteration.
  bool check_invariants = false;
};

// Throws kInvalidArgument naming the first field outside its range.
void ValidateConfig(const SolverConfig& config);

enum class StopReason {
  kZeroDirection,
  kZeroStep,
  kMaxIters,
  kTimeLimit,
  kObjectiveTolerance,
  kNumericFailure,
};
const char* StopReasonName(StopReason reason);

struct TraceRow {
  int iter = 0;
  double f = 0.0;
  double norm_s0 = 0.0;
  double norm_s = 0.0;
  double t = 0.0;
  double max_g = 0.0;
  int active = 0;
};

// Per-iteration invariant violations (populated when check_invariants).
struct InvariantCounts {
  int non_descent = 0;        // S^T grad f >= 0 with ||S0|| > 1e-10
  int stage_residual = 0;     // scaled residual above 1e-6
  int infeasible_iterate = 0; // max g >= 0 after a step
  int objective_increase = 0; // f(k+1) > f(k)
  double worst_stage_residual = 0.0;
  int total() const {
    return non_descent + stage_residual + infeasible_iterate + objective_increase;
  }
};

struct SolveReport {
  Eigen::VectorXd z;  // Packed final point.
  ValueVector v;
  JointStrategy pi;
  double f = 0.0;
  double epsilon = 0.0;  // f / (1 - beta)
  int iterations = 0;
  StopReason stop = StopReason::kMaxIters;
  std::string message;
  double initial_f = 0.0;
  Eigen::VectorXd gamma;  // Stage-2 multipliers of the last direction.
  int fallback_steps = 0;
  int discriminant_violations = 0;
  InvariantCounts invariants;
  std::vector<TraceRow> trace;
  double seconds = 0.0;
};

// Called with every trace row as it is recorded: one per iterate, the
// final iterate included.
using IterationCallback = std::function<void(const TraceRow&)>;

SolveReport Solve(const StochasticGame& game, const SolverConfig& config,
                  const IterationCallback& callback = nullptr);

// Same as Solve, starting from a caller-supplied strictly feasible packed point.
SolveReport SolveFrom(const Problem& problem, const Eigen::VectorXd& z0,
                      const SolverConfig& config, const IterationCallback& callback = nullptr);

// CSV with header iter,f,normS0,normS,t,maxg,active.
std::string TraceToCsv(const std::vector<TraceRow>& trace);
std::vector<TraceRow> TraceFromCsv(const std::string& text);
void ExportTrace(const SolveReport& report, const std::string& path);

}  // namespace sgnash

#endif  // SGNASH_SOLVER_HPP_
