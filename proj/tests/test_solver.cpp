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

#include <gtest/gtest.h>

#include <random>

#include "sgnash/diagnostics.hpp"
#include "sgnash/error.hpp"
#include "sgnash/feasible_init.hpp"
#include "sgnash/game.hpp"
#include "sgnash/nlp.hpp"
#include "sgnash/solver.hpp"
#include "test_util.hpp"

namespace sgnash {
namespace {

StochasticGame MatchingPennies(double beta) {
  Eigen::MatrixXd r(2, 2);
  r << 1, -1, -1, 1;
  return SingleStateGame(r, -r, beta);
}

TEST(Config, DefaultsValidateAndRangesAreChecked) {
  EXPECT_NO_THROW(ValidateConfig(SolverConfig{}));
  const auto bad = [](auto mutate) {
    SolverConfig c;
    mutate(c);
    EXPECT_THROW(ValidateConfig(c), Error);
  };
  bad([](SolverConfig& c) { c.ts_alpha = 1.0; });
  bad([](SolverConfig& c) { c.rho0 = 0.0; });
  bad([](SolverConfig& c) { c.delta0 = 1.0; });
  bad([](SolverConfig& c) { c.eta = 0.0; });
  bad([](SolverConfig& c) { c.nu = 1.0; });
  bad([](SolverConfig& c) { c.init_slack = -1.0; });
  bad([](SolverConfig& c) { c.max_iters = -1; });
  bad([](SolverConfig& c) { c.max_seconds = -1.0; });
}

TEST(Solve, SingleActionGameIsAlreadyOptimalInValues) {
  const StochasticGame g =
      SingleStateGame(Eigen::MatrixXd::Constant(1, 1, 2.0), Eigen::MatrixXd::Constant(1, 1, -1.0),
                      0.5);
  SolverConfig config;
  const SolveReport r = Solve(g, config);
  // With one action the value constraints pin v from below and f shrinks to 0.
  EXPECT_LT(r.f, 1e-6);
  EXPECT_NEAR(r.v[0][0], 4.0, 1e-3);
  EXPECT_NEAR(r.v[1][0], -2.0, 1e-3);
}

TEST(Solve, MatchingPenniesReachesMixedEquilibrium) {
  SolverConfig config;
  config.check_invariants = true;
  config.max_iters = 3000;
  const StochasticGame g = MatchingPennies(0.5);
  const SolveReport r = Solve(g, config);
  EXPECT_LT(r.f, 1e-6) << StopReasonName(r.stop);
  EXPECT_NEAR(r.pi.at(0, 0)[0], 0.5, 1e-3);
  EXPECT_NEAR(r.pi.at(1, 0)[0], 0.5, 1e-3);
  EXPECT_EQ(r.invariants.total(), 0);
  // The certificate holds at the emitted epsilon.
  const EpsCertificate cert = EpsNashCertify(g, r.pi, r.epsilon);
  EXPECT_TRUE(cert.passed) << cert.eps_emp << " vs " << r.epsilon;
}

TEST(Solve, TraceIsMonotoneAndFeasible) {
  std::mt19937_64 rng(51);
  testing::RandomGameOptions o;
  o.num_states = 4;
  const StochasticGame g = testing::RandomGame(rng, o);
  SolverConfig config;
  config.max_iters = 200;
  config.check_invariants = true;
  const SolveReport r = Solve(g, config);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front().iter, 0);
  EXPECT_NEAR(r.trace.front().f, r.initial_f, 1e-12);
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    EXPECT_LE(r.trace[k].f, r.trace[k - 1].f);
    EXPECT_LT(r.trace[k].max_g, 0.0);
  }
  EXPECT_EQ(r.invariants.total(), 0);
  EXPECT_NEAR(r.epsilon, r.f / (1.0 - g.discount()), 1e-15);
}

TEST(Solve, ZeroIterationBudgetReturnsStartingPoint) {
  const StochasticGame g = MatchingPennies(0.5);
  SolverConfig config;
  config.max_iters = 0;
  const SolveReport r = Solve(g, config);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.stop, StopReason::kMaxIters);
  const Problem p(g);
  EXPECT_EQ(r.z, InitialPoint(p, config.init_slack));
}

TEST(Solve, TimeLimitStopsTheLoop) {
  const StochasticGame g = MatchingPennies(0.5);
  SolverConfig config;
  config.max_seconds = 1e-12;
  const SolveReport r = Solve(g, config);
  EXPECT_EQ(r.stop, StopReason::kTimeLimit);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(Solve, RejectsInfeasibleStart) {
  const StochasticGame g = MatchingPennies(0.5);
  const Problem p(g);
  const Eigen::VectorXd z = p.Pack(ValueVector{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)},
                                   UniformStrategy(g));
  EXPECT_THROW(SolveFrom(p, z, SolverConfig{}), Error);
}

TEST(Solve, CallbackSeesEveryIteration) {
  const StochasticGame g = MatchingPennies(0.5);
  SolverConfig config;
  config.max_iters = 15;
  int calls = 0;
  const SolveReport r = Solve(g, config, [&](const TraceRow&) { ++calls; });
  EXPECT_EQ(calls, r.iterations + 1);
  EXPECT_EQ(calls, static_cast<int>(r.trace.size()));
}

TEST(Trace, CsvRoundTrip) {
  std::vector<TraceRow> rows{{0, 10.5, 1.0, 0.9, 0.5, -0.1, 0}, {1, 2.25, 0.5, 0.4, 1.0, -1e-7, 3}};
  const std::string csv = TraceToCsv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iter,f,normS0,normS,t,maxg,active");
  const std::vector<TraceRow> back = TraceFromCsv(csv);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].iter, 1);
  EXPECT_EQ(back[1].f, 2.25);
  EXPECT_EQ(back[1].max_g, -1e-7);
  EXPECT_EQ(back[1].active, 3);
  EXPECT_THROW(TraceFromCsv("iter,f\n1,2\n"), Error);
}

}  // namespace
}  // namespace sgnash
