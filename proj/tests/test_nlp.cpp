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

#include "sgnash/error.hpp"
#include "sgnash/game.hpp"
#include "sgnash/nlp.hpp"
#include "sgnash/terrain.hpp"
#include "test_util.hpp"

namespace sgnash {
namespace {

using testing::RandomGame;
using testing::RandomGameOptions;
using testing::RandomStrategy;

Eigen::VectorXd RandomPoint(std::mt19937_64& rng, const Problem& p) {
  const JointStrategy pi = RandomStrategy(rng, p.game());
  ValueVector v;
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int i = 0; i < 2; ++i) {
    v[i].resize(p.game().num_states());
    for (int x = 0; x < v[i].size(); ++x) v[i][x] = normal(rng);
  }
  return p.Pack(v, pi);
}

TEST(Census, SingleStateSingleAction) {
  const StochasticGame g =
      SingleStateGame(Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1), 0.5);
  const ProblemCensus c = Census(g);
  EXPECT_EQ(c.full_variables, 4);
  EXPECT_EQ(c.full_constraints, 4);
  EXPECT_EQ(c.packed_variables, 2);
  EXPECT_EQ(c.packed_constraints, 2);
}

TEST(Census, ReferenceTerrain) {
  TerrainSpec spec;
  spec.objects = {{0, 3}, {3, 3}};
  const ProblemCensus c = Census(BuildTerrainGame(spec).game);
  EXPECT_EQ(c.num_states, 647);
  EXPECT_EQ(c.full_variables, 9632);
  EXPECT_EQ(c.full_constraints, 16676);
  EXPECT_EQ(c.packed_variables, 2 * 647 + 2 * (4169 - 647));
  // Only the terminal state has a single action per player.
  EXPECT_EQ(c.packed_constraints, 4 * 4169 - 2);
}

TEST(Packing, RoundTripAndElimination) {
  std::mt19937_64 rng(1);
  RandomGameOptions o;
  o.num_states = 4;
  o.max_actions = 4;
  const StochasticGame g = RandomGame(rng, o);
  const Problem p(g);
  const JointStrategy pi = RandomStrategy(rng, g);
  ValueVector v{Eigen::VectorXd::Random(4), Eigen::VectorXd::Random(4)};
  const Eigen::VectorXd z = p.Pack(v, pi);
  const JointStrategy back = p.UnpackStrategy(z);
  const ValueVector vb = p.UnpackValues(z);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(vb[i], v[i]);
    for (std::size_t k = 0; k < pi.flat(i).size(); ++k) {
      EXPECT_NEAR(back.flat(i)[k], pi.flat(i)[k], 1e-15);
    }
  }
  const JointStrategy dir = p.UnpackStrategy(z, true);
  for (int i = 0; i < 2; ++i) {
    for (int x = 0; x < 4; ++x) {
      double total = 0.0;
      for (double s : dir.at(i, x)) total += s;
      EXPECT_NEAR(total, 0.0, 1e-14);
    }
  }
}

TEST(Objective, ZeroAtStrategyValue) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    RandomGameOptions o;
    o.num_states = 2 + k;
    const StochasticGame g = RandomGame(rng, o);
    const Problem p(g);
    const JointStrategy pi = RandomStrategy(rng, g);
    EXPECT_NEAR(p.Objective(p.Pack(StrategyValue(g, pi), pi)), 0.0, 1e-8);
  }
}

TEST(Objective, EqualsProductSum) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 5; ++k) {
    RandomGameOptions o;
    o.num_states = 3 + k;
    const StochasticGame g = RandomGame(rng, o);
    const Problem p(g);
    for (int t = 0; t < 200; ++t) {
      const Eigen::VectorXd z = RandomPoint(rng, p);
      EXPECT_NEAR(p.Objective(z), p.ObjectiveProductSum(z), 1e-10 * (1.0 + std::abs(p.Objective(z))));
    }
  }
}

TEST(Objective, NonNegativeAtFeasiblePoints) {
  std::mt19937_64 rng(4);
  RandomGameOptions o;
  o.num_states = 5;
  const StochasticGame g = RandomGame(rng, o);
  const Problem p(g);
  for (int t = 0; t < 50; ++t) {
    const Eigen::VectorXd z = testing::FeasiblePoint(p, RandomStrategy(rng, g), 0.1);
    EXPECT_LT(p.Constraints(z).maxCoeff(), 0.0);
    EXPECT_GE(p.Objective(z), -1e-9);
  }
}

TEST(Constraints, ValueConstraintsMatchBellmanQ) {
  std::mt19937_64 rng(5);
  RandomGameOptions o;
  o.num_states = 4;
  const StochasticGame g = RandomGame(rng, o);
  const Problem p(g);
  const JointStrategy pi = RandomStrategy(rng, g);
  const ValueVector v = StrategyValue(g, pi);
  const Eigen::VectorXd gz = p.Constraints(p.Pack(v, pi));
  double max_adv = -1e300;
  for (int i = 0; i < 2; ++i) {
    for (int x = 0; x < 4; ++x) {
      const Eigen::VectorXd q = BellmanQ(g, v, pi, i, x);
      for (int a = 0; a < q.size(); ++a) {
        const double h = q[a] - v[i][x];
        EXPECT_NEAR(gz[p.value_constraint(i, x, a)], h, 1e-12);
        max_adv = std::max(max_adv, h);
      }
    }
  }
  EXPECT_NEAR(gz.head(p.num_value_constraints()).maxCoeff(), max_adv, 1e-12);
}

TEST(Constraints, ZeroProbabilityGivesActiveNonNegativity) {
  const StochasticGame g =
      SingleStateGame(Eigen::MatrixXd::Ones(3, 2), Eigen::MatrixXd::Ones(3, 2), 0.5);
  const Problem p(g);
  JointStrategy pi(g);
  pi.at(0, 0)[0] = 0.0;
  pi.at(0, 0)[1] = 0.4;
  pi.at(0, 0)[2] = 0.6;
  pi.at(1, 0)[0] = 0.0;
  pi.at(1, 0)[1] = 1.0;
  const Eigen::VectorXd gz = p.Constraints(p.Pack(StrategyValue(g, pi), pi));
  EXPECT_EQ(gz[p.probability_constraint(0, 0, 0)], 0.0);
  EXPECT_EQ(gz[p.probability_constraint(1, 0, 0)], 0.0);
  // The eliminated action carries the sum constraint, here at -pi = -1.
  EXPECT_NEAR(gz[p.probability_constraint(1, 0, 1)], -1.0, 1e-15);
}

TEST(Gradient, ZeroDiscountValueDerivativeIsOne) {
  Eigen::MatrixXd r(2, 2);
  r << 1, -1, -1, 1;
  const StochasticGame g = SingleStateGame(r, -r, 0.0);
  const Problem p(g);
  std::mt19937_64 rng(6);
  const Eigen::VectorXd grad = p.ObjectiveGradient(RandomPoint(rng, p));
  EXPECT_EQ(grad[p.value_index(0, 0)], 1.0);
  EXPECT_EQ(grad[p.value_index(1, 0)], 1.0);
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 3; ++k) {
    RandomGameOptions o;
    o.num_states = 2 + 2 * k;
    const StochasticGame g = RandomGame(rng, o);
    const Problem p(g);
    for (int t = 0; t < 5; ++t) {
      const Eigen::VectorXd z = RandomPoint(rng, p);
      const Eigen::VectorXd grad = p.ObjectiveGradient(z);
      const Eigen::SparseMatrix<double> gg = p.ConstraintGradients(z);
      const Eigen::MatrixXd dense = gg;
      const auto f = [&](const Eigen::VectorXd& y) {
        return Eigen::VectorXd::Constant(1, p.Objective(y));
      };
      const auto c = [&](const Eigen::VectorXd& y) { return p.Constraints(y); };
      for (int col = 0; col < z.size(); ++col) {
        const double fd = testing::CentralDifference(f, z, col, 1e-6)[0];
        EXPECT_LT(testing::RelativeError(grad[col], fd), 1e-6) << "variable " << col;
        const Eigen::VectorXd cd = testing::CentralDifference(c, z, col, 1e-6);
        for (int j = 0; j < cd.size(); ++j) {
          EXPECT_LT(testing::RelativeError(dense(col, j), cd[j]), 1e-6)
              << "constraint " << j << " variable " << col;
        }
      }
    }
  }
}

TEST(Gradient, StructureOfProbabilityConstraints) {
  std::mt19937_64 rng(8);
  RandomGameOptions o;
  o.num_states = 3;
  o.max_actions = 4;
  const StochasticGame g = RandomGame(rng, o);
  const Problem p(g);
  const Eigen::MatrixXd gg = Eigen::MatrixXd(p.ConstraintGradients(RandomPoint(rng, p)));
  for (int j = p.num_value_constraints(); j < p.num_constraints(); ++j) {
    const ConstraintInfo& info = p.constraint(j);
    const int off = p.strategy_offset(info.player, info.state);
    const int m = g.num_actions(info.player, info.state);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(p.num_variables());
    if (info.kind == ConstraintKind::kNonNegative) {
      expected[off + info.action] = -1.0;
    } else {
      ASSERT_EQ(info.kind, ConstraintKind::kSum);
      expected.segment(off, m - 1).setOnes();
    }
    EXPECT_EQ(gg.col(j), expected) << "constraint " << j;
  }
}

TEST(Gradient, PatternIndependentOfPoint) {
  std::mt19937_64 rng(9);
  RandomGameOptions o;
  o.num_states = 4;
  const StochasticGame g = RandomGame(rng, o);
  const Problem p(g);
  const Eigen::SparseMatrix<double> a = p.ConstraintGradients(RandomPoint(rng, p));
  Eigen::SparseMatrix<double> b = p.ConstraintGradients(RandomPoint(rng, p));
  ASSERT_EQ(a.nonZeros(), b.nonZeros());
  EXPECT_TRUE(std::equal(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros(), b.innerIndexPtr()));
  const Eigen::VectorXd z = RandomPoint(rng, p);
  p.UpdateConstraintGradients(z, &b);
  EXPECT_EQ(Eigen::MatrixXd(b), Eigen::MatrixXd(p.ConstraintGradients(z)));
}

TEST(Problem, RejectsWrongLength) {
  const StochasticGame g =
      SingleStateGame(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2), 0.5);
  const Problem p(g);
  EXPECT_THROW(p.Objective(Eigen::VectorXd::Zero(p.num_variables() + 1)), Error);
}

}  // namespace
}  // namespace sgnash
