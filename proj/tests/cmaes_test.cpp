#include "qpoi/cmaes.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "qpoi/errors.hpp"

namespace qpoi {
namespace {

SearchBox box_of(double lo, double hi, int dim) {
  SearchBox box;
  box.lower = Eigen::VectorXd::Constant(dim, lo);
  box.upper = Eigen::VectorXd::Constant(dim, hi);
  return box;
}

TEST(SearchBox, ValidatesAndClips) {
  SearchBox box = box_of(-1.0, 2.0, 3);
  EXPECT_NO_THROW(box.validate());
  EXPECT_EQ(box.dim(), 3);
  EXPECT_DOUBLE_EQ(box.width(0), 3.0);

  Eigen::VectorXd x(3);
  x << -5.0, 0.5, 7.0;
  const Eigen::VectorXd clipped = box.clip(x);
  EXPECT_DOUBLE_EQ(clipped[0], -1.0);
  EXPECT_DOUBLE_EQ(clipped[1], 0.5);
  EXPECT_DOUBLE_EQ(clipped[2], 2.0);
  EXPECT_TRUE(box.contains(clipped));
  EXPECT_FALSE(box.contains(x));

  SearchBox bad = box;
  bad.lower[1] = 3.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(SearchBox, ReplicatesForBatches) {
  SearchBox box = box_of(0.0, 1.0, 2);
  box.lower[1] = -2.0;
  const SearchBox joint = box.replicated(3);
  ASSERT_EQ(joint.dim(), 6);
  for (int j = 0; j < 3; ++j) {
    EXPECT_DOUBLE_EQ(joint.lower[2 * j], 0.0);
    EXPECT_DOUBLE_EQ(joint.lower[2 * j + 1], -2.0);
    EXPECT_DOUBLE_EQ(joint.upper[2 * j], 1.0);
    EXPECT_DOUBLE_EQ(joint.upper[2 * j + 1], 1.0);
  }
}

TEST(DefaultPopulation, GrowsLogarithmically) {
  EXPECT_EQ(default_population(1), 4);
  EXPECT_EQ(default_population(10), 10);  // 4 + floor(3 ln 10)
}

TEST(Maximize, FindsSphereOptimum) {
  Eigen::VectorXd c(3);
  c << 0.3, -0.2, 0.7;
  const auto objective = [&](const Eigen::VectorXd& x) {
    return -(x - c).squaredNorm();
  };
  OptimizerBudget budget;
  budget.max_evals = 6000;
  budget.seed = 5;
  const OptimResult r = maximize(objective, box_of(-1.0, 1.0, 3), budget);
  ASSERT_EQ(r.argmax.size(), 3);
  EXPECT_LE(r.evals_used, 6000);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.argmax[i], c[i], 1e-4) << "coordinate " << i;
  }
  EXPECT_GT(r.value, -1e-7);
}

TEST(Maximize, SolvesRandomQuadraticInBatchDimension) {
  // d = 6 mirrors a q=2 batch over a 3-dimensional problem.
  std::mt19937_64 rng(19u);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  Eigen::MatrixXd B(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) B(i, j) = u(rng);
  }
  const Eigen::MatrixXd A =
      B * B.transpose() + Eigen::MatrixXd::Identity(6, 6);
  Eigen::VectorXd c(6);
  for (int i = 0; i < 6; ++i) c[i] = u(rng);
  const auto objective = [&](const Eigen::VectorXd& x) {
    return -((x - c).transpose() * A * (x - c))(0);
  };
  OptimizerBudget budget;
  budget.max_evals = 20000;
  budget.restarts = 2;
  budget.seed = 3;
  const OptimResult r = maximize(objective, box_of(-1.0, 1.0, 6), budget);
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(r.argmax[i], c[i], 1e-3) << "coordinate " << i;
  }
}

TEST(Maximize, RespectsBoxOnBoundaryOptima) {
  const auto objective = [](const Eigen::VectorXd& x) { return x.sum(); };
  OptimizerBudget budget;
  budget.max_evals = 4000;
  budget.seed = 11;
  const SearchBox box = box_of(-2.0, 1.5, 4);
  const OptimResult r = maximize(objective, box, budget);
  EXPECT_TRUE(box.contains(r.argmax));
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(r.argmax[i], 1.5, 1e-5);
  }
}

TEST(Maximize, ConstantObjectiveReturnsFeasiblePoint) {
  const auto objective = [](const Eigen::VectorXd&) { return 4.25; };
  OptimizerBudget budget;
  budget.max_evals = 500;
  budget.seed = 1;
  const SearchBox box = box_of(2.0, 3.0, 2);
  const OptimResult r = maximize(objective, box, budget);
  EXPECT_DOUBLE_EQ(r.value, 4.25);
  EXPECT_TRUE(box.contains(r.argmax));
  EXPECT_LE(r.evals_used, 500);
}

TEST(Maximize, DeterministicPerSeed) {
  const auto objective = [](const Eigen::VectorXd& x) {
    return std::sin(3.0 * x[0]) + std::cos(2.0 * x[1]) - 0.1 * x.squaredNorm();
  };
  const SearchBox box = box_of(-3.0, 3.0, 2);
  OptimizerBudget budget;
  budget.max_evals = 2000;
  budget.seed = 42;
  const OptimResult a = maximize(objective, box, budget);
  const OptimResult b = maximize(objective, box, budget);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.evals_used, b.evals_used);
  ASSERT_EQ(a.argmax.size(), b.argmax.size());
  for (int i = 0; i < a.argmax.size(); ++i) {
    EXPECT_EQ(a.argmax[i], b.argmax[i]);
  }
  budget.seed = 43;
  const OptimResult other = maximize(objective, box, budget);
  EXPECT_GT((a.argmax - other.argmax).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Maximize, BudgetIsHonored) {
  int calls = 0;
  const auto objective = [&](const Eigen::VectorXd& x) {
    ++calls;
    return -x.squaredNorm();
  };
  OptimizerBudget budget;
  budget.max_evals = 300;
  budget.restarts = 5;
  budget.seed = 2;
  const OptimResult r = maximize(objective, box_of(-1.0, 1.0, 5), budget);
  EXPECT_EQ(calls, r.evals_used);
  EXPECT_LE(r.evals_used, 300);
  EXPECT_GT(r.evals_used, 0);
}

TEST(Maximize, WrapsObjectiveFailures) {
  const auto objective = [](const Eigen::VectorXd&) -> double {
    throw std::runtime_error("surrogate exploded");
  };
  OptimizerBudget budget;
  budget.max_evals = 100;
  EXPECT_THROW(maximize(objective, box_of(0.0, 1.0, 2), budget),
               NumericalError);
}

}  // namespace
}  // namespace qpoi
