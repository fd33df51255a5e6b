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


// Runs every acceptance criterion and prints one PASS or FAIL line for each.
// The exit status is the number of failing criteria unless --report is given.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "sgnash/diagnostics.hpp"
#include "sgnash/feasible_init.hpp"
#include "sgnash/game.hpp"
#include "sgnash/nlp.hpp"
#include "sgnash/solver.hpp"
#include "sgnash/sparse_ldl.hpp"
#include "sgnash/terrain.hpp"
#include "test_util.hpp"

namespace sgnash {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Tally {
  int failed = 0;
  void Line(int id, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failed;
  }
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Violations of the feasible-direction properties seen in one run, from the
// solver's own checks and from the trace.
int PropertyViolations(const SolveReport& r) {
  int count = r.invariants.total();
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    if (!(r.trace[k].max_g < 0.0)) ++count;
    if (k > 0 && r.trace[k].f > r.trace[k - 1].f) ++count;
  }
  return count;
}

TerrainGame ReferenceTerrain() {
  TerrainSpec spec;
  spec.objects = {{0, 3}, {3, 3}};
  spec.discount = 0.75;
  return BuildTerrainGame(spec);
}

std::vector<StochasticGame> TestGames() {
  std::mt19937_64 rng(2024);
  std::vector<StochasticGame> games;
  for (int k = 0; k < 5; ++k) {
    testing::RandomGameOptions o;
    o.num_states = 2 + 2 * k;
    o.max_actions = 3;
    o.discount = 0.6 + 0.05 * k;
    games.push_back(testing::RandomGame(rng, o));
  }
  return games;
}

void Census(Tally* tally) {
  const auto start = Clock::now();
  const ProblemCensus c = sgnash::Census(ReferenceTerrain().game);
  const double secs = SecondsSince(start);
  const bool pass = c.num_states == 647 && c.full_variables == 9632 &&
                    c.full_constraints == 16676 && secs < 5.0;
  tally->Line(1, pass,
              Format("states %d variables %lld constraints %lld in %.2f s", c.num_states,
                     static_cast<long long>(c.full_variables),
                     static_cast<long long>(c.full_constraints), secs));
}

void Sparsity(const Problem& problem, const Eigen::VectorXd& z, Tally* tally) {
  const auto start = Clock::now();
  const Eigen::SparseMatrix<double> grad = problem.ConstraintGradients(z);
  const SymmetricLower h =
      BuildH(grad, problem.Constraints(z), Eigen::VectorXd::Ones(problem.num_constraints()));
  const double secs = SecondsSince(start);
  const double fill = FillFraction(h);
  tally->Line(2, fill >= 0.02 && fill <= 0.08 && secs < 60.0,
              Format("H is %d x %d, fill %.2f%%, assembled in %.2f s", static_cast<int>(h.rows()),
                     static_cast<int>(h.cols()), 100.0 * fill, secs));
}

struct TerrainOutcome {
  int violations = 0;
  int iterations = 0;
};

TerrainOutcome TerrainSolve(const TerrainGame& terrain, const Problem& problem,
                            const Eigen::VectorXd& z0, double init_seconds, double budget,
                            double delta0, Tally* tally) {
  SolverConfig config;
  config.init_slack = 0.5;
  config.ts_alpha = 0.5;
  config.rho0 = 0.9;
  config.delta0 = delta0;
  config.max_iters = 3000;
  config.max_seconds = std::max(1.0, budget - init_seconds);
  config.check_invariants = true;
  const SolveReport r = SolveFrom(problem, z0, config, [](const TraceRow& row) {
    if (row.iter % 100 == 0) std::fprintf(stderr, "terrain iter %d f %.6g\n", row.iter, row.f);
  });
  const double secs = init_seconds + r.seconds;
  const EpsCertificate cert = EpsNashCertify(terrain.game, r.pi, r.epsilon, 1e-6);
  const bool pass = r.f <= 1e-3 && cert.passed && secs <= budget;
  tally->Line(3, pass,
              Format("f %.4g -> %.4g after %d iterations (%s), eps %.4g, eps_emp %.4g "
                     "certified %s, %.0f s of %.0f s budget",
                     r.initial_f, r.f, r.iterations, StopReasonName(r.stop), r.epsilon,
                     cert.eps_emp, cert.passed ? "yes" : "no", secs, budget));
  return {PropertyViolations(r), r.iterations};
}

void Gradients(const std::vector<StochasticGame>& games, Tally* tally) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 2.0);
  double worst = 0.0;
  int points = 0;
  for (const StochasticGame& g : games) {
    const Problem p(g);
    for (int t = 0; t < 20; ++t, ++points) {
      ValueVector v;
      for (int i = 0; i < 2; ++i) {
        v[i].resize(g.num_states());
        for (int x = 0; x < g.num_states(); ++x) v[i][x] = normal(rng);
      }
      const Eigen::VectorXd z = p.Pack(v, testing::RandomStrategy(rng, g));
      const Eigen::VectorXd grad_f = p.ObjectiveGradient(z);
      const Eigen::MatrixXd grad_g = Eigen::MatrixXd(p.ConstraintGradients(z));
      const auto f = [&](const Eigen::VectorXd& y) {
        return Eigen::VectorXd::Constant(1, p.Objective(y));
      };
      const auto c = [&](const Eigen::VectorXd& y) { return p.Constraints(y); };
      for (int k = 0; k < z.size(); ++k) {
        worst = std::max(worst, testing::RelativeError(
                                    grad_f[k], testing::CentralDifference(f, z, k, 1e-6)[0]));
        const Eigen::VectorXd cd = testing::CentralDifference(c, z, k, 1e-6);
        for (int j = 0; j < cd.size(); ++j) {
          worst = std::max(worst, testing::RelativeError(grad_g(k, j), cd[j]));
        }
      }
    }
  }
  tally->Line(4, worst < 1e-6,
              Format("%d points over %zu games, worst relative error %.3g", points, games.size(),
                     worst));
}

void LambdaIdentity(const std::vector<StochasticGame>& games, Tally* tally) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> margin(0.01, 2.0);
  double worst = 0.0;
  int points = 0;
  for (const StochasticGame& g : games) {
    const Problem p(g);
    for (int t = 0; t < 100; ++t, ++points) {
      const Eigen::VectorXd z =
          testing::FeasiblePoint(p, testing::RandomStrategy(rng, g), margin(rng));
      const Eigen::VectorXd r =
          p.ObjectiveGradient(z) - p.ConstraintGradients(z) * LambdaPrime(p, z);
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
  }
  tally->Line(5, worst < 1e-8,
              Format("%d feasible points, worst |grad f - G lambda'|_inf %.3g", points, worst));
}

void ZeroObjective(const std::vector<StochasticGame>& games, Tally* tally) {
  std::mt19937_64 rng(6);
  double worst = 0.0;
  int samples = 0;
  int violating = 0;
  for (const StochasticGame& g : games) {
    const Problem p(g);
    for (int t = 0; t < 50; ++t, ++samples) {
      const JointStrategy pi = testing::RandomStrategy(rng, g);
      const Eigen::VectorXd z = p.Pack(testing::IterativeValue(g, pi), pi);
      worst = std::max(worst, std::abs(p.Objective(z)));
      if (p.Constraints(z).head(p.num_value_constraints()).maxCoeff() > 1e-9) ++violating;
    }
  }
  tally->Line(6, worst < 1e-8,
              Format("%d strategies, worst |f| %.3g, %d violate the value constraints", samples,
                     worst, violating));
}

struct OracleOutcome {
  int violations = 0;
  int runs = 0;
};

double StrategyDistance(const JointStrategy& pi, const BimatrixEquilibrium& e) {
  double d = 0.0;
  for (int a = 0; a < e.x.size(); ++a) d = std::max(d, std::abs(pi.at(0, 0)[a] - e.x[a]));
  for (int b = 0; b < e.y.size(); ++b) d = std::max(d, std::abs(pi.at(1, 0)[b] - e.y[b]));
  return d;
}

OracleOutcome OracleEquivalence(Tally* tally) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> reward(-1.0, 1.0);
  SolverConfig config;
  config.check_invariants = true;
  OracleOutcome out;
  int matched = 0;
  int flagged = 0;
  int unexplained = 0;
  int certified = 0;
  for (int size : {2, 3}) {
    for (int k = 0; k < 20; ++k) {
      Eigen::MatrixXd r1(size, size);
      Eigen::MatrixXd r2(size, size);
      SupportEnumeration se;
      do {
        for (int a = 0; a < size; ++a) {
          for (int b = 0; b < size; ++b) {
            r1(a, b) = reward(rng);
            r2(a, b) = reward(rng);
          }
        }
        se = SupportEnumerationNash(r1, r2);
      } while (se.degenerate || se.equilibria.empty());
      const StochasticGame g = SingleStateGame(r1, r2, 0.5);
      const SolveReport r = Solve(g, config);
      out.violations += PropertyViolations(r);
      ++out.runs;
      double best = 1e300;
      for (const BimatrixEquilibrium& e : se.equilibria) {
        best = std::min(best, StrategyDistance(r.pi, e));
      }
      if (best <= 1e-3) {
        ++matched;
      } else if (KktnCheck(Problem(g), r.z).verdict != KktnVerdict::kKktN) {
        ++flagged;
      } else {
        ++unexplained;
      }
      const EpsCertificate cert = EpsNashCertify(g, r.pi, r.epsilon);
      if (cert.passed && cert.eps_emp < 1e-4) ++certified;
    }
  }
  const bool pass = unexplained == 0 && certified >= 0.8 * out.runs;
  tally->Line(7, pass,
              Format("%d games: %d match an enumerated equilibrium, %d flagged non-KKT-N, "
                     "%d unexplained; %d certified with eps_emp < 1e-4",
                     out.runs, matched, flagged, unexplained, certified));
  return out;
}

void SparseSolver(Tally* tally) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> size(1, 500);
  std::uniform_real_distribution<double> density(0.002, 0.05);
  double worst = 0.0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng);
    const Eigen::MatrixXd a = testing::RandomSymmetric(rng, n, density(rng), trial % 2 == 0);
    const Eigen::VectorXd b = Eigen::VectorXd::Random(n);
    LdlFactorization f;
    f.Factorize(testing::Lower(a));
    const Eigen::VectorXd x = f.Solve(b);
    const Eigen::VectorXd oracle = a.fullPivLu().solve(b);
    worst = std::max(worst, testing::ScaledResidual(a, x, b));
    worst_gap = std::max(worst_gap, (x - oracle).cwiseAbs().maxCoeff() /
                                        (1.0 + oracle.cwiseAbs().maxCoeff()));
  }
  tally->Line(9, worst <= 1e-8,
              Format("100 systems, worst scaled residual %.3g, worst gap to dense LU %.3g", worst,
                     worst_gap));
}

}  // namespace
}  // namespace sgnash

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  bool report = false;
  double budget = 900.0;
  double delta0 = 0.1;
  app.add_flag("--report", report, "Exit 0 whenever every criterion ran");
  app.add_option("--terrain-seconds", budget, "Wall-clock budget for the terrain solve")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--terrain-delta0", delta0, "Step fraction for the terrain solve")
      ->capture_default_str()
      ->check(CLI::Range(1e-6, 0.999999));
  CLI11_PARSE(app, argc, argv);

  using namespace sgnash;
  Tally tally;
  Census(&tally);

  const TerrainGame terrain = ReferenceTerrain();
  const Problem problem(terrain.game);
  const auto init_start = Clock::now();
  const Eigen::VectorXd z0 = InitialPoint(problem, 0.5);
  const double init_seconds = SecondsSince(init_start);
  Sparsity(problem, z0, &tally);
  const TerrainOutcome terrain_run =
      TerrainSolve(terrain, problem, z0, init_seconds, budget, delta0, &tally);

  const std::vector<StochasticGame> games = TestGames();
  Gradients(games, &tally);
  LambdaIdentity(games, &tally);
  ZeroObjective(games, &tally);
  const OracleOutcome oracle = OracleEquivalence(&tally);

  const int violations = terrain_run.violations + oracle.violations;
  tally.Line(8, violations == 0,
             Format("%d violations over %d terrain iterations and %d small-game runs",
                    violations, terrain_run.iterations, oracle.runs));
  SparseSolver(&tally);

  std::printf("%d of 9 criteria pass\n", 9 - tally.failed);
  return report ? 0 : tally.failed;
}
