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

#ifndef SGNASH_STEP_LENGTH_HPP_
#define SGNASH_STEP_LENGTH_HPP_

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "sgnash/nlp.hpp"

namespace sgnash {

struct Interval {
  double lo;
  double hi;
};

// Finite union of disjoint closed intervals, kept sorted. Endpoints may be
// infinite.
class IntervalSet {
 public:
  IntervalSet() = default;
  static IntervalSet Empty() { return {}; }
  static IntervalSet All();
  static IntervalSet Of(double lo, double hi);

  // Adds [lo, hi], merging overlaps. Ignored when lo > hi.
  void Add(double lo, double hi);
  IntervalSet Intersect(const IntervalSet& other) const;

  bool empty() const { return parts_.empty(); }
  bool Contains(double t) const;
  double Max() const { return parts_.back().hi; }
  const std::vector<Interval>& parts() const { return parts_; }

  friend bool operator==(const IntervalSet& a, const IntervalSet& b);

 private:
  std::vector<Interval> parts_;
};

// {t : b + c t + d t^2 <= 0}.
IntervalSet QuadraticFeasible(double b, double c, double d);

// f(z + t s) = d0 + d1 t + d2 t^2 + d3 t^3.
struct Cubic {
  double d0 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double operator()(double t) const { return d0 + t * (d1 + t * (d2 + t * d3)); }
};

Cubic CubicCoeffs(const Problem& problem, const Eigen::VectorXd& z, const Eigen::VectorXd& s);

// Local minimizer of the cubic, chosen by a positive second derivative.
// Returns false when the cubic has no local minimum.
bool CubicMinimizer(const Cubic& f, double* t);

// g_j(z + t s) - delta_j g_j(z) = b + c t + d t^2 for every constraint j.
struct ConstraintQuadratics {
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  Eigen::VectorXd d;
};
ConstraintQuadratics ConstraintCoeffs(const Problem& problem, const Eigen::VectorXd& z,
                                      const Eigen::VectorXd& s, const Eigen::VectorXd& delta);

struct StepParams {
  double delta0 = 0.9;
  double eta = 0.1;
  double nu = 2.0;
  double t_cap = 1e6;
  double t_min = 1e-14;
};

struct StepResult {
  double t = 0.0;
  double f_new = 0.0;
  bool fallback = false;  // Backtracking picked t after every candidate failed.
  // Value constraints whose discriminant is negative while d >= 0.
  int discriminant_violations = 0;
  std::vector<double> candidates;
  IntervalSet feasible;
};

struct CubicStep {
  double t = 0.0;  // 0 when nothing qualifies.
  bool fallback = false;
  std::vector<double> candidates;
};

// Candidates are the cubic's local minimizer when it lies in `feasible`
// (otherwise the feasible endpoints bracketing it) and max `feasible`. The
// lowest cubic value satisfying phi(t) <= phi(0) + eta t slope and
// `admissible` wins; failing that, t = 1, 1/nu, ... down to t_min.
CubicStep SelectStep(const Cubic& phi, const IntervalSet& feasible, double slope,
                     const StepParams& params, const std::function<bool(double)>& admissible);

// Exact step: minimises the cubic restriction over candidate steps drawn
// from the feasible set F = [0, t_cap] intersected with every constraint's
// quadratic set, subject to f(z + t s) <= f(z) + t eta s^T grad_f. delta_j is
// delta0 when gamma_j >= 0 and 1 otherwise. Returns t = 0 when no step of at
// least t_min qualifies.
StepResult OptimalStep(const Problem& problem, const Eigen::VectorXd& z,
                       const Eigen::VectorXd& s, const Eigen::VectorXd& gamma,
                       const Eigen::VectorXd& grad_f, const StepParams& params);

}  // namespace sgnash

#endif  // SGNASH_STEP_LENGTH_HPP_
