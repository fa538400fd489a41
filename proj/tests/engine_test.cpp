#include "qpoi/engine.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "qpoi/errors.hpp"
#include "qpoi/problems.hpp"

namespace qpoi {
namespace {

// Light search budgets keep the unit tests fast; the acceptance suite runs
// the desk-scale configuration.
EngineConfig tiny_config(int eta, int t_c, int q, Variant variant) {
  EngineConfig config;
  config.eta = eta;
  config.t_c = t_c;
  config.q = q;
  config.acquisition.variant = variant;
  config.optimizer.max_evals = 300;
  config.optimizer.restarts = 0;
  config.refit.restarts = 2;
  config.refit.evals_per_restart = 50;
  config.seed = 7;
  return config;
}

TEST(LatinHypercube, StratifiedPerDimension) {
  SearchBox box;
  box.lower = Eigen::VectorXd::Zero(2);
  box.upper = Eigen::VectorXd::Ones(2);
  box.upper[1] = 4.0;
  const int eta = 8;
  const Eigen::MatrixXd X = latin_hypercube(eta, box, 3);
  ASSERT_EQ(X.rows(), eta);
  ASSERT_EQ(X.cols(), 2);
  for (int j = 0; j < 2; ++j) {
    std::set<int> strata;
    for (int i = 0; i < eta; ++i) {
      EXPECT_GE(X(i, j), box.lower[j]);
      EXPECT_LT(X(i, j), box.upper[j]);
      strata.insert(static_cast<int>(
          (X(i, j) - box.lower[j]) / box.width(j) * eta));
    }
    EXPECT_EQ(strata.size(), static_cast<std::size_t>(eta)) << "dim " << j;
  }
}

TEST(LatinHypercube, DeterministicPerSeed) {
  SearchBox box;
  box.lower = Eigen::VectorXd::Constant(5, -1.0);
  box.upper = Eigen::VectorXd::Constant(5, 1.0);
  const Eigen::MatrixXd a = latin_hypercube(30, box, 11);
  const Eigen::MatrixXd b = latin_hypercube(30, box, 11);
  const Eigen::MatrixXd c = latin_hypercube(30, box, 12);
  EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT((a - c).cwiseAbs().maxCoeff(), 0.0);

  const Eigen::MatrixXd single = latin_hypercube(1, box, 1);
  EXPECT_TRUE(box.contains(single.row(0).transpose()));
  EXPECT_THROW(latin_hypercube(0, box, 1), ConfigError);
}

TEST(Run, BudgetEqualToDoeStopsAfterSampling) {
  const Problem problem = make_problem("linear", 2);
  const RunLog log = run(problem, tiny_config(6, 6, 2, Variant::kBest));
  ASSERT_EQ(log.records.size(), 1u);
  EXPECT_EQ(log.records[0].iter, 0);
  EXPECT_EQ(log.records[0].evals, 6);
  EXPECT_TRUE(std::isnan(log.records[0].acq_value));
  EXPECT_GT(log.final_hv(), 0.0);
  EXPECT_FALSE(log.final_archive().points().empty());
}

TEST(Run, LinearToyCoversTheSegment) {
  // Every point of the toy's image is Pareto-optimal, so the archive should
  // accumulate most of the 20 evaluations.
  const Problem problem = make_problem("linear", 1);
  EngineConfig config = tiny_config(6, 20, 1, Variant::kPoi);
  config.hv_reference = {2.0, 2.0};
  const RunLog log = run(problem, config);
  EXPECT_EQ(log.records.back().evals, 20);
  EXPECT_GE(log.final_archive().size(), 10u);
  EXPECT_GT(log.final_hv(), 2.0);  // the full segment dominates area 3.5
}

TEST(Run, AccountingAndMonotonicity) {
  const Problem problem = make_problem("zdt1", 2);
  EngineConfig config = tiny_config(6, 12, 2, Variant::kBest);
  const RunLog log = run(problem, config);
  ASSERT_EQ(log.records.size(), 4u);  // DoE + 3 iterations
  for (std::size_t k = 0; k < log.records.size(); ++k) {
    const RunRecord& r = log.records[k];
    EXPECT_EQ(r.iter, static_cast<int>(k));
    EXPECT_EQ(r.evals, 6 + 2 * static_cast<int>(k));
    if (k > 0) {
      EXPECT_GE(r.hv, log.records[k - 1].hv);
      EXPECT_GE(r.wallclock_ms, log.records[k - 1].wallclock_ms);
      EXPECT_TRUE(std::isfinite(r.acq_value));
      EXPECT_GE(r.acq_value, 0.0);
      EXPECT_LE(r.acq_value, 1.0);
    }
  }
}

TEST(Run, DeterministicPerSeed) {
  const Problem problem = make_problem("linear", 2);
  const EngineConfig config = tiny_config(4, 8, 2, Variant::kBest);
  const RunLog a = run(problem, config);
  const RunLog b = run(problem, config);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    EXPECT_EQ(a.records[k].hv, b.records[k].hv);
    EXPECT_TRUE(a.records[k].archive.points() == b.records[k].archive.points());
  }
  EngineConfig other = config;
  other.seed = 8;
  const RunLog c = run(problem, other);
  EXPECT_FALSE(a.final_archive().points() == c.final_archive().points());
}

TEST(Run, MonteCarloAcquisitionSupportsLargerBatches) {
  const Problem problem = make_problem("linear", 2);
  EngineConfig config = tiny_config(4, 10, 3, Variant::kBest);
  config.acquisition.mode = AcquisitionMode::kMonteCarlo;
  config.acquisition.n_sample = 400;
  config.acquisition.seed = 9;
  const RunLog log = run(problem, config);
  EXPECT_EQ(log.records.back().evals, 10);  // 4 + 2 batches of 3
  EXPECT_EQ(log.records.back().iter, 2);
}

TEST(Run, ValidatesConfiguration) {
  const Problem problem = make_problem("linear", 2);
  EXPECT_THROW(run(problem, tiny_config(1, 6, 2, Variant::kBest)),
               ConfigError);
  EXPECT_THROW(run(problem, tiny_config(6, 5, 2, Variant::kBest)),
               ConfigError);
  EXPECT_THROW(run(problem, tiny_config(6, 12, 0, Variant::kBest)),
               ConfigError);
  EXPECT_THROW(run(problem, tiny_config(6, 12, 2, Variant::kPoi)),
               ConfigError);
  EXPECT_THROW(run(problem, tiny_config(6, 12, 1, Variant::kAll)),
               ConfigError);

  EngineConfig bad_ref = tiny_config(6, 12, 2, Variant::kBest);
  bad_ref.hv_reference = {std::nan(""), 11.0};
  EXPECT_THROW(run(problem, bad_ref), ConfigError);

  Problem broken = problem;
  broken.m = 3;
  EXPECT_THROW(run(broken, tiny_config(6, 12, 2, Variant::kBest)),
               ConfigError);
}

TEST(Run, AbortCarriesPartialLog) {
  Problem problem = make_problem("linear", 2);
  int calls = 0;
  const auto base = problem.evaluate;
  problem.evaluate = [&](const Eigen::VectorXd& x) {
    if (++calls > 4) throw std::runtime_error("sensor offline");
    return base(x);
  };
  try {
    run(problem, tiny_config(4, 8, 2, Variant::kBest));
    FAIL() << "expected EngineAbort";
  } catch (const EngineAbort& e) {
    EXPECT_NE(std::string(e.what()).find("sensor offline"), std::string::npos);
    ASSERT_EQ(e.partial_log().records.size(), 1u);  // DoE completed
    EXPECT_EQ(e.partial_log().records[0].evals, 4);
  }
}

TEST(Run, AbortsOnNonFiniteObjective) {
  Problem problem = make_problem("linear", 2);
  int calls = 0;
  const auto base = problem.evaluate;
  problem.evaluate = [&](const Eigen::VectorXd& x) {
    auto f = base(x);
    if (++calls == 3) f[1] = std::nan("");
    return f;
  };
  try {
    run(problem, tiny_config(4, 8, 2, Variant::kBest));
    FAIL() << "expected EngineAbort";
  } catch (const EngineAbort& e) {
    EXPECT_TRUE(e.partial_log().records.empty());  // failed inside the DoE
  }
}

TEST(RunLog, AccessorsRequireRecords) {
  const RunLog empty;
  EXPECT_THROW(empty.final_hv(), std::runtime_error);
  EXPECT_THROW(empty.final_archive(), std::runtime_error);
}

}  // namespace
}  // namespace qpoi
