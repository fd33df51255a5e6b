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
#include "sgnash/game.hpp"
#include "sgnash/nlp.hpp"
#include "test_util.hpp"

namespace sgnash {
namespace {

using testing::RandomGame;
using testing::RandomGameOptions;
using testing::RandomStrategy;

// Pure equilibria of a bimatrix game by exhaustive best-response checks.
std::vector<std::pair<int, int>> PureEquilibria(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      if (a.col(c).maxCoeff() <= a(r, c) && b.row(r).maxCoeff() <= b(r, c)) out.push_back({r, c});
    }
  }
  return out;
}

TEST(SupportEnumeration, PrisonersDilemma) {
  Eigen::MatrixXd a(2, 2);
  a << 3, 0, 5, 1;
  const SupportEnumeration e = SupportEnumerationNash(a, a.transpose());
  ASSERT_EQ(e.equilibria.size(), 1u);
  EXPECT_NEAR(e.equilibria[0].x[1], 1.0, 1e-12);
  EXPECT_NEAR(e.equilibria[0].y[1], 1.0, 1e-12);
}

TEST(SupportEnumeration, MatchingPennies) {
  Eigen::MatrixXd a(2, 2);
  a << 1, -1, -1, 1;
  const SupportEnumeration e = SupportEnumerationNash(a, -a);
  ASSERT_EQ(e.equilibria.size(), 1u);
  EXPECT_NEAR(e.equilibria[0].x[0], 0.5, 1e-12);
  EXPECT_NEAR(e.equilibria[0].y[0], 0.5, 1e-12);
}

TEST(SupportEnumeration, RandomGamesYieldMutualBestResponses) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const int m = 2 + k % 2;
    Eigen::MatrixXd a(m, m);
    Eigen::MatrixXd b(m, m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        a(r, c) = u(rng);
        b(r, c) = u(rng);
      }
    }
    const SupportEnumeration e = SupportEnumerationNash(a, b);
    // Nondegenerate games have an odd number of equilibria.
    EXPECT_EQ(e.equilibria.size() % 2, 1u);
    int pure = 0;
    for (const auto& eq : e.equilibria) {
      const Eigen::VectorXd ay = a * eq.y;
      const Eigen::VectorXd bx = b.transpose() * eq.x;
      EXPECT_NEAR(eq.x.dot(ay), ay.maxCoeff(), 1e-9);
      EXPECT_NEAR(eq.y.dot(bx), bx.maxCoeff(), 1e-9);
      pure += eq.x.maxCoeff() > 1.0 - 1e-12 && eq.y.maxCoeff() > 1.0 - 1e-12;
    }
    EXPECT_EQ(pure, static_cast<int>(PureEquilibria(a, b).size()));
  }
}

TEST(BestResponse, MatchesPolicyIteration) {
  std::mt19937_64 rng(62);
  for (int k = 0; k < 10; ++k) {
    RandomGameOptions o;
    o.num_states = 3 + k;
    const StochasticGame g = RandomGame(rng, o);
    const JointStrategy pi = RandomStrategy(rng, g);
    for (int i = 0; i < 2; ++i) {
      const BestResponse br = BestResponseValue(g, pi, i);
      const Eigen::VectorXd oracle = testing::PolicyIterationValue(g, pi, i);
      EXPECT_LT((br.value - oracle).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(EpsCertificate, NashPointPassesAndOthersFail) {
  Eigen::MatrixXd a(2, 2);
  a << 1, -1, -1, 1;
  const StochasticGame g = SingleStateGame(a, -a, 0.5);
  JointStrategy pi = UniformStrategy(g);
  const EpsCertificate ok = EpsNashCertify(g, pi, 0.0);
  EXPECT_TRUE(ok.passed);
  EXPECT_LT(ok.eps_emp, 1e-9);
  pi.at(0, 0)[0] = 0.8;
  pi.at(0, 0)[1] = 0.2;
  const EpsCertificate bad = EpsNashCertify(g, pi, 1e-3);
  EXPECT_FALSE(bad.passed);
  // Player 2 gains 0.6 per stage by always matching against 0.8/0.2: the
  // mixed value is 0 and the deviation value 0.6 / (1 - 0.5).
  EXPECT_NEAR(bad.per_player[1], 1.2, 1e-8);
}

// Nash point of a random single-state game, lifted with v = value.
Eigen::VectorXd NashPoint(const Problem& p, const BimatrixEquilibrium& eq) {
  const StochasticGame& g = p.game();
  JointStrategy pi(g);
  for (int a = 0; a < eq.x.size(); ++a) pi.at(0, 0)[a] = eq.x[a];
  for (int a = 0; a < eq.y.size(); ++a) pi.at(1, 0)[a] = eq.y[a];
  return p.Pack(StrategyValue(g, pi), pi);
}

TEST(LambdaPrime, ReproducesObjectiveGradient) {
  std::mt19937_64 rng(63);
  for (int k = 0; k < 5; ++k) {
    RandomGameOptions o;
    o.num_states = 2 + 2 * k;
    const StochasticGame g = RandomGame(rng, o);
    const Problem p(g);
    for (int t = 0; t < 20; ++t) {
      const Eigen::VectorXd z = testing::FeasiblePoint(p, RandomStrategy(rng, g), 0.1);
      const Eigen::VectorXd lp = LambdaPrime(p, z);
      const Eigen::VectorXd r = p.ObjectiveGradient(z) - p.ConstraintGradients(z) * lp;
      EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(Kkt, NashPointHasZeroResiduals) {
  Eigen::MatrixXd a(2, 2);
  a << 3, 0, 5, 1;
  const StochasticGame g = SingleStateGame(a, a.transpose(), 0.5);
  const Problem p(g);
  const SupportEnumeration e = SupportEnumerationNash(a, a.transpose());
  const Eigen::VectorXd z = NashPoint(p, e.equilibria[0]);
  const KktReport r = KktResidual(p, z, -LambdaPrime(p, z));
  EXPECT_LT(r.stationarity, 1e-12);
  EXPECT_LT(r.complementarity, 1e-12);
  EXPECT_LE(r.primal, 1e-12);
  EXPECT_GE(r.dual, -1e-12);
  EXPECT_FALSE(r.active.empty());
}

TEST(Kkt, NonNashPointViolatesComplementarity) {
  Eigen::MatrixXd a(2, 2);
  a << 3, 0, 5, 1;
  const StochasticGame g = SingleStateGame(a, a.transpose(), 0.5);
  const Problem p(g);
  const JointStrategy pi = UniformStrategy(g);
  const Eigen::VectorXd z = p.Pack(StrategyValue(g, pi), pi);
  const KktReport r = KktResidual(p, z, -LambdaPrime(p, z));
  EXPECT_GT(r.complementarity, 0.1);
}

TEST(Kktn, MixedNashIsRankDeficientByDimension) {
  // Every value constraint is active, so the projector annihilates G_K.
  Eigen::MatrixXd a(2, 2);
  a << 1, -1, -1, 1;
  const StochasticGame g = SingleStateGame(a, -a, 0.5);
  const Problem p(g);
  const SupportEnumeration e = SupportEnumerationNash(a, -a);
  const KktnReport r = KktnCheck(p, NashPoint(p, e.equilibria[0]));
  EXPECT_EQ(r.verdict, KktnVerdict::kDegenerate) << r.note;
  EXPECT_TRUE(r.decided_by_dimension);
  EXPECT_EQ(r.num_active, 4);
  EXPECT_LT(r.lambda_prime_inactive, 1e-12);
}

TEST(Kktn, InactiveGradientsInsideActiveSpanAreDegenerate) {
  // Player 0 plays its first action and is indifferent against q = 1/2;
  // player 1 puts mass on a strictly worse column, so f = 1/2. The four
  // active gradients span all four variables, leaving G' = 0.
  Eigen::MatrixXd r1(2, 2);
  r1 << 1, 0, 0, 1;
  Eigen::MatrixXd r2(2, 2);
  r2 << 1, 0, 0, 0;
  const StochasticGame g = SingleStateGame(r1, r2, 0.5);
  const Problem p(g);
  JointStrategy pi(g);
  pi.at(0, 0)[0] = 1.0;
  pi.at(0, 0)[1] = 0.0;
  pi.at(1, 0)[0] = 0.5;
  pi.at(1, 0)[1] = 0.5;
  const Eigen::VectorXd z =
      p.Pack(ValueVector{Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 2.0)},
             pi);
  EXPECT_NEAR(p.Objective(z), 0.5, 1e-15);
  const KktnReport r = KktnCheck(p, z);
  EXPECT_EQ(r.num_active, 4);
  EXPECT_EQ(r.num_inactive, 4);
  EXPECT_EQ(r.rank, 0);
  EXPECT_EQ(r.verdict, KktnVerdict::kDegenerate) << r.note;
  EXPECT_GT(r.lambda_prime_inactive, 0.1);
}

TEST(Kktn, NoActiveConstraintsUsesGradientsOfK) {
  // One action each: only the two value constraints, with gradients
  // (beta - 1) e_i in the value block.
  const StochasticGame g = SingleStateGame(Eigen::MatrixXd::Constant(1, 1, 1.0),
                                           Eigen::MatrixXd::Constant(1, 1, 2.0), 0.5);
  const Problem p(g);
  const Eigen::VectorXd z = p.Pack(
      ValueVector{Eigen::VectorXd::Constant(1, 3.0), Eigen::VectorXd::Constant(1, 5.0)},
      UniformStrategy(g));
  const KktnReport r = KktnCheck(p, z);
  EXPECT_EQ(r.num_active, 0);
  EXPECT_EQ(r.verdict, KktnVerdict::kKktN) << r.note;
  EXPECT_EQ(r.rank, 2);
  EXPECT_NEAR(r.min_singular, 0.25, 1e-12);
  EXPECT_NEAR(r.max_singular, 0.25, 1e-12);
}

TEST(Kktn, DenseLimitGivesUndetermined) {
  const StochasticGame g = SingleStateGame(Eigen::MatrixXd::Constant(1, 1, 1.0),
                                           Eigen::MatrixXd::Constant(1, 1, 2.0), 0.5);
  const Problem p(g);
  const Eigen::VectorXd z = p.Pack(
      ValueVector{Eigen::VectorXd::Constant(1, 3.0), Eigen::VectorXd::Constant(1, 5.0)},
      UniformStrategy(g));
  EXPECT_EQ(KktnCheck(p, z, 1e-6, 1.0).verdict, KktnVerdict::kUndetermined);
}

TEST(ZeroObjective, DoesNotCertifyNash) {
  std::mt19937_64 rng(65);
  int violating = 0;
  for (int t = 0; t < 50; ++t) {
    RandomGameOptions o;
    o.num_states = 4;
    const StochasticGame g = RandomGame(rng, o);
    const Problem p(g);
    const JointStrategy pi = RandomStrategy(rng, g);
    const Eigen::VectorXd z = p.Pack(StrategyValue(g, pi), pi);
    EXPECT_LT(p.Objective(z), 1e-8);
    violating += p.Constraints(z).head(p.num_value_constraints()).maxCoeff() > 1e-8;
  }
  EXPECT_GT(violating, 40);
}

}  // namespace
}  // namespace sgnash
