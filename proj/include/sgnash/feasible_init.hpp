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

#ifndef SGNASH_FEASIBLE_INIT_HPP_
#define SGNASH_FEASIBLE_INIT_HPP_

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sgnash/game.hpp"
#include "sgnash/nlp.hpp"

namespace sgnash {

// Inequality system rows * v >= lower over free variables v. The cost is
// carried for completeness; phase one ignores it.
struct LpProblem {
  Eigen::SparseMatrix<double, Eigen::RowMajor> rows;
  Eigen::VectorXd lower;
  Eigen::VectorXd cost;
};

struct LpSolution {
  Eigen::VectorXd x;
  int pivots = 0;
};

// Phase one of the revised simplex method with a single auxiliary variable
// x0 >= 0 added to every row, minimised under Bland's rule. Free variables
// never leave the basis once they enter. Throws kInfeasible when the
// auxiliary optimum exceeds 1e-9 (scaled by the largest |lower|).
LpSolution PhaseOneSimplex(const LpProblem& lp);

// Value-constraint system of one player against a fixed strategy pair,
// padded by `slack`:
//   v^i(x) - beta sum_y P(y|x, a^i, pi^-i) v^i(y) >= r^i(x, a^i, pi^-i) + slack.
LpProblem ValueConstraintLp(const StochasticGame& game, const JointStrategy& pi,
                            int player, double slack);

// Uniform strategies with values from PhaseOneSimplex on both players'
// padded systems. Every value constraint holds with margin >= slack up to
// round-off, so the packed point is strictly feasible.
Eigen::VectorXd InitialPoint(const Problem& problem, double slack);

}  // namespace sgnash

#endif  // SGNASH_FEASIBLE_INIT_HPP_
