// Microbenchmarks for the numerical hot paths: the bivariate CDF kernels,
// the five exact acquisition variants across archive sizes, the Monte Carlo
// estimator, posterior batch prediction and the inner optimizer.

#include <array>
#include <cmath>
#include <random>

#include <benchmark/benchmark.h>
#include <Eigen/Dense>

#include "qpoi/acquisition.hpp"
#include "qpoi/cmaes.hpp"
#include "qpoi/engine.hpp"
#include "qpoi/gp.hpp"
#include "qpoi/prob_kernels.hpp"
#include "qpoi/problems.hpp"

namespace qpoi {
namespace {

BatchPrediction concave_batch() {
  Eigen::MatrixXd M(2, 2), L(2, 2);
  M << 1.0, 5.0, 5.0, 1.0;
  L << 2.5, 2.5, 2.5, 2.5;
  return BatchPrediction::from_moments(M, L, {0.5, -0.5});
}

void BM_BvnCdf(benchmark::State& state) {
  const BivariateGaussian g = BivariateGaussian::standard(0.5);
  double x = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvn_cdf(x, 0.3, g));
    x += 1e-6;
  }
}
BENCHMARK(BM_BvnCdf);

void BM_GammaRect(benchmark::State& state) {
  const BivariateGaussian g = BivariateGaussian::standard(-0.4);
  double a = -1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_rect(a, a + 1.5, -0.5, 0.75, g));
    a += 1e-6;
  }
}
BENCHMARK(BM_GammaRect);

void BM_QpoiExact(benchmark::State& state) {
  const Variant variant = static_cast<Variant>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const BatchPrediction batch = concave_batch();
  const ParetoArchive front = synthetic_front(FrontKind::kConcave, n, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpoi_exact(batch, front, variant));
  }
}
BENCHMARK(BM_QpoiExact)
    ->ArgsProduct({{static_cast<int>(Variant::kAll),
                    static_cast<int>(Variant::kOne),
                    static_cast<int>(Variant::kBest),
                    static_cast<int>(Variant::kWorst),
                    static_cast<int>(Variant::kMean)},
                   {10, 100, 1000}});

void BM_QpoiExactTruncated(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BatchPrediction batch = concave_batch();
  const ParetoArchive front = synthetic_front(FrontKind::kConcave, n, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpoi_exact(batch, front, Variant::kAll, true));
  }
}
BENCHMARK(BM_QpoiExactTruncated)->Arg(100)->Arg(1000);

void BM_QpoiMonteCarlo(benchmark::State& state) {
  const int n_sample = static_cast<int>(state.range(0));
  const BatchPrediction batch = concave_batch();
  const ParetoArchive front = synthetic_front(FrontKind::kConcave, 100, 10.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        qpoi_monte_carlo(batch, front, n_sample, seed++));
  }
}
BENCHMARK(BM_QpoiMonteCarlo)->Arg(10000)->Arg(100000);

void BM_PosteriorBatch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = 5;
  SearchBox box;
  box.lower = Eigen::VectorXd::Zero(d);
  box.upper = Eigen::VectorXd::Ones(d);
  const Eigen::MatrixXd X = latin_hypercube(n, box, 1);
  Eigen::VectorXd y1(n), y2(n);
  for (int i = 0; i < n; ++i) {
    y1[i] = std::sin(3.0 * X.row(i).sum());
    y2[i] = std::cos(2.0 * X.row(i).sum()) + 0.1 * X(i, 0);
  }
  FitConfig fc;
  fc.restarts = 1;
  fc.evals_per_restart = 30;
  const std::vector<SurrogateModel> models = {fit(X, y1, box, fc),
                                              fit(X, y2, box, fc)};
  Eigen::MatrixXd Xq(2, d);
  Xq.row(0) = Eigen::VectorXd::Constant(d, 0.3).transpose();
  Xq.row(1) = Eigen::VectorXd::Constant(d, 0.7).transpose();
  for (auto _ : state) {
    benchmark::DoNotOptimize(posterior_batch(models, Xq));
  }
}
BENCHMARK(BM_PosteriorBatch)->Arg(30)->Arg(100)->Arg(270);

void BM_CmaesSphere(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  SearchBox box;
  box.lower = Eigen::VectorXd::Constant(d, -2.0);
  box.upper = Eigen::VectorXd::Constant(d, 2.0);
  OptimizerBudget budget;
  budget.max_evals = 2000;
  budget.restarts = 0;
  budget.seed = 3;
  const auto sphere = [](const Eigen::VectorXd& x) {
    return -x.squaredNorm();
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximize(sphere, box, budget));
  }
}
BENCHMARK(BM_CmaesSphere)->Arg(5)->Arg(10);

}  // namespace
}  // namespace qpoi

BENCHMARK_MAIN();
