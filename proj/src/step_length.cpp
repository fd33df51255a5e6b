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

#include "sgnash/step_length.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgnash/error.hpp"

namespace sgnash {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

bool CubicMinimizer(const Cubic& f, double* t) {
  const double a = 3.0 * f.d3;
  const double b = 2.0 * f.d2;
  const double c = f.d1;
  if (a == 0.0) {
    if (b <= 0.0) return false;
    *t = -c / b;
    return true;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return false;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double roots[2];
  int count = 0;
  if (q != 0.0) {
    roots[count++] = q / a;
    roots[count++] = c / q;
  } else {
    roots[count++] = 0.0;
  }
  for (int k = 0; k < count; ++k) {
    if (2.0 * f.d2 + 6.0 * f.d3 * roots[k] > 0.0) {
      *t = roots[k];
      return true;
    }
  }
  return false;
}

IntervalSet IntervalSet::All() { return Of(-kInf, kInf); }

IntervalSet IntervalSet::Of(double lo, double hi) {
  IntervalSet out;
  out.Add(lo, hi);
  return out;
}

void IntervalSet::Add(double lo, double hi) {
  if (!(lo <= hi)) return;
  std::vector<Interval> merged;
  merged.reserve(parts_.size() + 1);
  Interval cur{lo, hi};
  bool placed = false;
  for (const Interval& p : parts_) {
    if (p.hi < cur.lo) {
      merged.push_back(p);
    } else if (cur.hi < p.lo) {
      if (!placed) {
        merged.push_back(cur);
        placed = true;
      }
      merged.push_back(p);
    } else {
      cur.lo = std::min(cur.lo, p.lo);
      cur.hi = std::max(cur.hi, p.hi);
    }
  }
  if (!placed) merged.push_back(cur);
  parts_ = std::move(merged);
}

IntervalSet IntervalSet::Intersect(const IntervalSet& other) const {
  IntervalSet out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    const double lo = std::max(parts_[i].lo, other.parts_[j].lo);
    const double hi = std::min(parts_[i].hi, other.parts_[j].hi);
    if (lo <= hi) out.parts_.push_back({lo, hi});
    if (parts_[i].hi < other.parts_[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

bool IntervalSet::Contains(double t) const {
  for (const Interval& p : parts_) {
    if (p.lo <= t && t <= p.hi) return true;
  }
  return false;
}

bool operator==(const IntervalSet& a, const IntervalSet& b) {
  if (a.parts_.size() != b.parts_.size()) return false;
  for (std::size_t k = 0; k < a.parts_.size(); ++k) {
    if (a.parts_[k].lo != b.parts_[k].lo || a.parts_[k].hi != b.parts_[k].hi) return false;
  }
  return true;
}

IntervalSet QuadraticFeasible(double b, double c, double d) {
  if (d == 0.0) {
    if (c == 0.0) return b <= 0.0 ? IntervalSet::All() : IntervalSet::Empty();
    const double root = -b / c;
    return c > 0.0 ? IntervalSet::Of(-kInf, root) : IntervalSet::Of(root, kInf);
  }
  const double disc = c * c - 4.0 * b * d;
  if (disc < 0.0) return d >= 0.0 ? IntervalSet::Empty() : IntervalSet::All();
  const double q = -0.5 * (c + std::copysign(std::sqrt(disc), c));
  double r1 = 0.0;
  double r2 = 0.0;
  if (q != 0.0) {
    r1 = q / d;
    r2 = b / q;
  }
  const double lo = std::min(r1, r2);
  const double hi = std::max(r1, r2);
  if (d > 0.0) return IntervalSet::Of(lo, hi);
  IntervalSet out = IntervalSet::Of(-kInf, lo);
  out.Add(hi, kInf);
  return out;
}

Cubic CubicCoeffs(const Problem& problem, const Eigen::VectorXd& z, const Eigen::VectorXd& s) {
  const StochasticGame& g = problem.game();
  const ValueVector v0 = problem.UnpackValues(z);
  const ValueVector sv = problem.UnpackValues(s);
  const JointStrategy pi = problem.UnpackStrategy(z);
  const JointStrategy sp = problem.UnpackStrategy(s, true);
  const Backups e = problem.ComputeBackups(v0, true);
  const Backups phi = problem.ComputeBackups(sv, false);
  Cubic out;
  out.d0 = v0[0].sum() + v0[1].sum();
  out.d1 = sv[0].sum() + sv[1].sum();
  for (int x = 0; x < g.num_states(); ++x) {
    const auto p1 = pi.at(0, x);
    const auto p2 = pi.at(1, x);
    const auto s1 = sp.at(0, x);
    const auto s2 = sp.at(1, x);
    for (int a1 = 0; a1 < g.num_actions(0, x); ++a1) {
      for (int a2 = 0; a2 < g.num_actions(1, x); ++a2) {
        const std::size_t k = g.joint_index(x, a1, a2);
        const double ek = e[k][0] + e[k][1];
        const double fk = phi[k][0] + phi[k][1];
        const double aa = p1[a1] * p2[a2];
        const double bb = p1[a1] * s2[a2] + s1[a1] * p2[a2];
        const double cc = s1[a1] * s2[a2];
        out.d0 -= aa * ek;
        out.d1 -= aa * fk + bb * ek;
        out.d2 -= bb * fk + cc * ek;
        out.d3 -= cc * fk;
      }
    }
  }
  return out;
}

ConstraintQuadratics ConstraintCoeffs(const Problem& problem, const Eigen::VectorXd& z,
                                      const Eigen::VectorXd& s, const Eigen::VectorXd& delta) {
  const int n = problem.num_constraints();
  Require(s.size() == problem.num_variables(), ErrorCode::kDimensionMismatch,
          "direction length mismatch");
  Require(delta.size() == n, ErrorCode::kDimensionMismatch, "delta length mismatch");
  const StochasticGame& g = problem.game();
  const Eigen::VectorXd g0 = problem.Constraints(z);
  const ValueVector v0 = problem.UnpackValues(z);
  const ValueVector sv = problem.UnpackValues(s);
  const JointStrategy pi = problem.UnpackStrategy(z);
  const JointStrategy sp = problem.UnpackStrategy(s, true);
  const Backups e = problem.ComputeBackups(v0, true);
  const Backups phi = problem.ComputeBackups(sv, false);

  ConstraintQuadratics out;
  out.b = (Eigen::VectorXd::Ones(n) - delta).cwiseProduct(g0);
  out.c = Eigen::VectorXd::Zero(n);
  out.d = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const ConstraintInfo& info = problem.constraint(j);
    const int x = info.state;
    switch (info.kind) {
      case ConstraintKind::kValue: {
        const int i = info.player;
        const int other = 1 - i;
        const auto q = pi.at(other, x);
        const auto sq = sp.at(other, x);
        double c = -sv[i][x];
        double d = 0.0;
        for (int b = 0; b < g.num_actions(other, x); ++b) {
          const std::size_t k =
              i == 0 ? g.joint_index(x, info.action, b) : g.joint_index(x, b, info.action);
          c += q[b] * phi[k][i] + sq[b] * e[k][i];
          d += sq[b] * phi[k][i];
        }
        out.c[j] = c;
        out.d[j] = d;
        break;
      }
      case ConstraintKind::kSum:
        out.c[j] = s.segment(problem.strategy_offset(info.player, x), info.action).sum();
        break;
      case ConstraintKind::kNonNegative:
        out.c[j] = -s[problem.strategy_offset(info.player, x) + info.action];
        break;
    }
  }
  return out;
}

CubicStep SelectStep(const Cubic& phi, const IntervalSet& feasible, double slope,
                     const StepParams& params, const std::function<bool(double)>& admissible) {
  CubicStep out;
  if (feasible.empty() || feasible.Max() <= 0.0) return out;
  const auto armijo = [&](double t) { return phi(t) <= phi.d0 + t * params.eta * slope; };
  double tm = 0.0;
  if (CubicMinimizer(phi, &tm) && tm > 0.0) {
    if (feasible.Contains(tm)) {
      out.candidates.push_back(tm);
    } else {
      double below = -kInf;
      double above = kInf;
      for (const Interval& p : feasible.parts()) {
        if (p.hi < tm) below = std::max(below, p.hi);
        if (p.lo > tm) above = std::min(above, p.lo);
      }
      if (below > 0.0) out.candidates.push_back(below);
      if (std::isfinite(above)) out.candidates.push_back(above);
    }
  }
  out.candidates.push_back(feasible.Max());

  double best_f = kInf;
  for (double t : out.candidates) {
    if (!(t > 0.0) || !armijo(t)) continue;
    const double ft = phi(t);
    if (ft < best_f && (!admissible || admissible(t))) {
      best_f = ft;
      out.t = t;
    }
  }
  if (out.t == 0.0) {
    for (double t = 1.0; t >= params.t_min; t /= params.nu) {
      if (feasible.Contains(t) && armijo(t) && (!admissible || admissible(t))) {
        out.t = t;
        out.fallback = true;
        break;
      }
    }
  }
  return out;
}

StepResult OptimalStep(const Problem& problem, const Eigen::VectorXd& z,
                       const Eigen::VectorXd& s, const Eigen::VectorXd& gamma,
                       const Eigen::VectorXd& grad_f, const StepParams& params) {
  const int n = problem.num_constraints();
  Require(gamma.size() == n, ErrorCode::kDimensionMismatch, "multiplier length mismatch");
  Require(params.delta0 > 0.0 && params.delta0 < 1.0 && params.eta > 0.0 && params.eta < 1.0 &&
              params.nu > 1.0 && params.t_cap > 0.0 && params.t_min > 0.0,
          ErrorCode::kInvalidArgument, "step parameters out of range");
  Eigen::VectorXd delta(n);
  for (int j = 0; j < n; ++j) delta[j] = gamma[j] >= 0.0 ? params.delta0 : 1.0;

  StepResult out;
  const ConstraintQuadratics q = ConstraintCoeffs(problem, z, s, delta);
  const Eigen::VectorXd g0 = problem.Constraints(z);
  IntervalSet feasible = IntervalSet::Of(0.0, params.t_cap);
  for (int j = 0; j < n && !feasible.empty(); ++j) {
    if (problem.constraint(j).kind == ConstraintKind::kValue) {
      const double disc = q.c[j] * q.c[j] - 4.0 * q.b[j] * q.d[j];
      if (disc < 0.0 && q.d[j] >= 0.0) ++out.discriminant_violations;
    }
    feasible = feasible.Intersect(QuadraticFeasible(q.b[j], q.c[j], q.d[j]));
  }
  out.feasible = feasible;

  const Cubic phi = CubicCoeffs(problem, z, s);
  const double slope = s.dot(grad_f);
  const double f0 = phi.d0;
  const auto strictly_feasible = [&](double t) {
    const Eigen::VectorXd gt = problem.Constraints(z + t * s);
    for (int j = 0; j < n; ++j) {
      if (!(gt[j] < 0.0)) return false;
      if (gt[j] > delta[j] * g0[j] + 1e-9 * (1.0 + std::abs(g0[j]))) return false;
    }
    return true;
  };
  if (feasible.empty() || feasible.Max() <= 0.0) {
    out.f_new = f0;
    return out;
  }

  const CubicStep pick = SelectStep(phi, feasible, slope, params, strictly_feasible);
  out.candidates = pick.candidates;
  out.fallback = pick.fallback;
  const double best_t = pick.t;
  out.t = best_t;
  out.f_new = best_t > 0.0 ? problem.Objective(z + best_t * s) : f0;
  return out;
}

}  // namespace sgnash
