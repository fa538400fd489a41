// Command-line front end: `run` drives the full Bayesian loop and writes
// traces, `validate` runs fast property suites, `speedtest` times the five
// exact acquisition variants against their Monte Carlo estimator.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "qpoi/acquisition.hpp"
#include "qpoi/engine.hpp"
#include "qpoi/errors.hpp"
#include "qpoi/experiment.hpp"
#include "qpoi/prob_kernels.hpp"
#include "qpoi/problems.hpp"

namespace qpoi {
namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Column j of M / Lambda holds the means / standard deviations of batch
// point j (rows are the two objectives); rho[i] is the cross-point
// correlation of objective i.
BatchPrediction pair_batch(const std::array<double, 2>& f_point1,
                           const std::array<double, 2>& f_point2,
                           const std::array<double, 2>& sd_point1,
                           const std::array<double, 2>& sd_point2,
                           const std::array<double, 2>& rho) {
  Eigen::MatrixXd M(2, 2), L(2, 2);
  M << f_point1[0], f_point2[0], f_point1[1], f_point2[1];
  L << sd_point1[0], sd_point2[0], sd_point1[1], sd_point2[1];
  return BatchPrediction::from_moments(M, L, rho);
}

BatchPrediction table_batch(FrontKind kind) {
  return kind == FrontKind::kConvex
             ? pair_batch({4.0, 9.0}, {8.0, 7.0}, {2.5, 2.5}, {2.5, 2.5},
                          {0.5, -0.5})
             : pair_batch({1.0, 5.0}, {5.0, 1.0}, {2.5, 2.5}, {2.5, 2.5},
                          {0.5, -0.5});
}

struct Instance {
  ParetoArchive archive;
  BatchPrediction batch;
};

Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size_dist(1, 50);
  std::uniform_real_distribution<double> coord(-2.0, 6.0);
  std::uniform_real_distribution<double> sd(0.1, 3.0);
  std::uniform_real_distribution<double> corr(-0.95, 0.95);

  const int n = size_dist(rng);
  std::vector<double> f1(n), f2(n);
  for (double& v : f1) v = coord(rng);
  for (double& v : f2) v = coord(rng);
  std::sort(f1.begin(), f1.end());
  std::sort(f2.begin(), f2.end(), std::greater<>());
  Instance inst;
  for (int i = 0; i < n; ++i) inst.archive.insert({f1[i], f2[i]});
  inst.batch =
      pair_batch({coord(rng), coord(rng)}, {coord(rng), coord(rng)},
                 {sd(rng), sd(rng)}, {sd(rng), sd(rng)},
                 {corr(rng), corr(rng)});
  return inst;
}

const std::array<Variant, 5> kBatchVariants = {
    Variant::kBest, Variant::kAll, Variant::kMean, Variant::kOne,
    Variant::kWorst};

// --------------------------------------------------------------------------
// validate: named property checks grouped into four suites.

struct Property {
  std::string name;
  std::function<bool(std::string&)> check;  // fills a detail message
};

int run_properties(const std::string& suite,
                   const std::vector<Property>& properties) {
  int failures = 0;
  for (const Property& p : properties) {
    std::string detail;
    bool ok = false;
    try {
      ok = p.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s/%s%s%s\n", ok ? "ok" : "FAIL", suite.c_str(),
                p.name.c_str(), detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++failures;
  }
  return failures;
}

std::vector<Property> kernel_properties() {
  return {
      {"arcsine_origin",
       [](std::string& detail) {
         double worst = 0.0;
         for (int k = -18; k <= 18; ++k) {
           const double rho = 0.05 * k;
           const double closed =
               0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
           worst = std::max(
               worst, std::abs(bvn_cdf(0.0, 0.0,
                                       BivariateGaussian::standard(rho)) -
                               closed));
         }
         detail = "max error " + fmt(worst);
         return worst <= 1e-9;
       }},
      {"rectangle_additivity",
       [](std::string& detail) {
         std::mt19937_64 rng(3);
         std::uniform_real_distribution<double> lo(-3.0, 2.0);
         std::uniform_real_distribution<double> width(0.2, 3.0);
         std::uniform_real_distribution<double> frac(0.2, 0.8);
         std::uniform_real_distribution<double> corr(-0.95, 0.95);
         double worst = 0.0;
         for (int k = 0; k < 100; ++k) {
           const double a = lo(rng), b = a + width(rng);
           const double c = lo(rng), d = c + width(rng);
           const double m = a + frac(rng) * (b - a);
           const BivariateGaussian g = BivariateGaussian::standard(corr(rng));
           worst = std::max(
               worst, std::abs(gamma_rect(a, b, c, d, g) -
                               gamma_rect(a, m, c, d, g) -
                               gamma_rect(m, b, c, d, g)));
         }
         detail = "max split mismatch " + fmt(worst);
         return worst <= 1e-12;
       }},
      {"argument_symmetry",
       [](std::string& detail) {
         std::mt19937_64 rng(4);
         std::uniform_real_distribution<double> arg(-4.0, 4.0);
         std::uniform_real_distribution<double> corr(-0.99, 0.99);
         double worst = 0.0;
         for (int k = 0; k < 100; ++k) {
           const double x = arg(rng), y = arg(rng);
           const BivariateGaussian g = BivariateGaussian::standard(corr(rng));
           worst = std::max(worst,
                            std::abs(bvn_cdf(x, y, g) - bvn_cdf(y, x, g)));
         }
         detail = "max asymmetry " + fmt(worst);
         return worst <= 1e-13;
       }},
      {"univariate_reduction",
       [](std::string& detail) {
         std::mt19937_64 rng(5);
         std::uniform_real_distribution<double> arg(-4.0, 4.0);
         std::uniform_real_distribution<double> corr(-0.99, 0.99);
         const double inf = std::numeric_limits<double>::infinity();
         double worst = 0.0;
         for (int k = 0; k < 50; ++k) {
           const double x = arg(rng);
           const BivariateGaussian g = BivariateGaussian::standard(corr(rng));
           worst = std::max(worst, std::abs(bvn_cdf(x, inf, g) -
                                            norm_cdf(x, 0.0, 1.0)));
           worst = std::max(worst, std::abs(bvn_cdf(inf, x, g) -
                                            norm_cdf(x, 0.0, 1.0)));
         }
         detail = "max reduction error " + fmt(worst);
         return worst <= 1e-13;
       }},
      {"degenerate_correlation",
       [](std::string& detail) {
         double worst = 0.0;
         for (double x = -3.0; x <= 3.0; x += 0.5) {
           for (double y = -3.0; y <= 3.0; y += 0.5) {
             const double hi =
                 bvn_cdf(x, y, BivariateGaussian::standard(1.0));
             const double lo =
                 bvn_cdf(x, y, BivariateGaussian::standard(-1.0));
             const double phi_x = norm_cdf(x, 0.0, 1.0);
             const double phi_y = norm_cdf(y, 0.0, 1.0);
             worst = std::max(worst,
                              std::abs(hi - std::min(phi_x, phi_y)));
             worst = std::max(
                 worst, std::abs(lo - std::max(phi_x + phi_y - 1.0, 0.0)));
           }
         }
         detail = "max closed-form error " + fmt(worst);
         return worst <= 1e-12;
       }},
  };
}

std::vector<Property> qpoi_properties() {
  return {
      {"exact_matches_monte_carlo",
       [](std::string& detail) {
         const ParetoArchive front =
             synthetic_front(FrontKind::kConcave, 10, 10.0);
         const BatchPrediction batch = table_batch(FrontKind::kConcave);
         const McEstimates mc = qpoi_monte_carlo(batch, front, 100000, 99);
         double worst = -1.0;
         for (const Variant v : kBatchVariants) {
           const double exact = qpoi_exact(batch, front, v);
           const double tol =
               std::max(0.01, 4.0 * std::sqrt(exact * (1.0 - exact) / 1e5));
           worst = std::max(worst, std::abs(exact - mc.get(v)) - tol);
         }
         detail = "worst excess over tolerance " + fmt(worst);
         return worst <= 0.0;
       }},
      {"one_all_mean_identity",
       [](std::string& detail) {
         std::mt19937_64 rng(21);
         double worst = 0.0;
         for (int k = 0; k < 50; ++k) {
           const Instance inst = random_instance(rng);
           const double all =
               qpoi_exact(inst.batch, inst.archive, Variant::kAll);
           const double one =
               qpoi_exact(inst.batch, inst.archive, Variant::kOne);
           const double mean =
               qpoi_exact(inst.batch, inst.archive, Variant::kMean);
           worst = std::max(worst, std::abs(one + all - 2.0 * mean));
         }
         detail = "max residual " + fmt(worst);
         return worst <= 1e-9;
       }},
      {"batch_point_exchange",
       [](std::string& detail) {
         std::mt19937_64 rng(22);
         double worst = 0.0;
         for (int k = 0; k < 50; ++k) {
           const Instance inst = random_instance(rng);
           BatchPrediction swapped = inst.batch;
           swapped.M.col(0).swap(swapped.M.col(1));
           swapped.Lambda.col(0).swap(swapped.Lambda.col(1));
           for (Eigen::MatrixXd& S : swapped.Sigma) {
             S.row(0).swap(S.row(1));
             S.col(0).swap(S.col(1));
           }
           for (const Variant v : kBatchVariants) {
             worst = std::max(
                 worst, std::abs(qpoi_exact(inst.batch, inst.archive, v) -
                                 qpoi_exact(swapped, inst.archive, v)));
           }
         }
         detail = "max exchange mismatch " + fmt(worst);
         return worst <= 1e-12;
       }},
      {"dominated_batch_vanishes",
       [](std::string& detail) {
         ParetoArchive archive;
         archive.insert({0.0, 1.0});
         archive.insert({1.0, 0.0});
         const BatchPrediction batch = pair_batch(
             {8.0, 8.0}, {9.0, 9.0}, {0.1, 0.1}, {0.1, 0.1}, {0.0, 0.0});
         double worst = 0.0;
         for (const Variant v : kBatchVariants) {
           worst = std::max(worst, qpoi_exact(batch, archive, v));
         }
         detail = "max probability " + fmt(worst);
         return worst <= 1e-10;
       }},
      {"truncation_stays_close",
       [](std::string& detail) {
         std::mt19937_64 rng(23);
         double worst = 0.0;
         for (int k = 0; k < 50; ++k) {
           const Instance inst = random_instance(rng);
           for (const Variant v : kBatchVariants) {
             const double off = qpoi_exact(inst.batch, inst.archive, v);
             const double on = qpoi_exact(inst.batch, inst.archive, v, true);
             // One-sided pruning for the composites; `one` combines both
             // directions, so allow the sum of both single-point tails.
             worst = std::max(worst, std::abs(on - off));
           }
         }
         detail = "max on/off gap " + fmt(worst);
         return worst <= 0.03;
       }},
  };
}

std::vector<Property> ordering_properties() {
  return {
      {"chain_500_instances",
       [](std::string& detail) {
         std::mt19937_64 rng(31);
         double worst = -1.0;
         for (int k = 0; k < 500; ++k) {
           const Instance inst = random_instance(rng);
           double prev = -1.0;
           for (const Variant v : kBatchVariants) {
             const double value = qpoi_exact(inst.batch, inst.archive, v);
             worst = std::max(worst, prev - value);
             prev = value;
           }
         }
         detail = "worst adjacent violation " + fmt(worst);
         return worst <= 1e-9;
       }},
      {"chain_with_truncation",
       [](std::string& detail) {
         std::mt19937_64 rng(32);
         double worst = -1.0;
         for (int k = 0; k < 100; ++k) {
           const Instance inst = random_instance(rng);
           double prev = -1.0;
           for (const Variant v : kBatchVariants) {
             const double value =
                 qpoi_exact(inst.batch, inst.archive, v, true);
             worst = std::max(worst, prev - value);
             prev = value;
           }
         }
         detail = "worst adjacent violation " + fmt(worst);
         return worst <= 0.032;  // pruning error bounds differ per variant
       }},
      {"monte_carlo_chain_is_exact",
       [](std::string& detail) {
         std::mt19937_64 rng(33);
         double worst = -1.0;
         for (int k = 0; k < 50; ++k) {
           const Instance inst = random_instance(rng);
           const McEstimates e =
               qpoi_monte_carlo(inst.batch, inst.archive, 2000, 77 + k);
           const std::array<double, 5> chain = {e.best, e.all, e.mean, e.one,
                                                e.worst};
           for (std::size_t i = 1; i < chain.size(); ++i) {
             worst = std::max(worst, chain[i - 1] - chain[i]);
           }
         }
         detail = "worst adjacent violation " + fmt(worst);
         return worst <= 0.0;  // shared draws make the chain exact
       }},
  };
}

std::vector<Property> mc_properties() {
  return {
      {"deterministic_per_seed",
       [](std::string& detail) {
         std::mt19937_64 rng(41);
         const Instance inst = random_instance(rng);
         const McEstimates a =
             qpoi_monte_carlo(inst.batch, inst.archive, 20000, 5);
         const McEstimates b =
             qpoi_monte_carlo(inst.batch, inst.archive, 20000, 5);
         const bool same = a.best == b.best && a.all == b.all &&
                           a.mean == b.mean && a.one == b.one &&
                           a.worst == b.worst;
         detail = same ? "bitwise identical" : "estimates differ";
         return same;
       }},
      {"binomial_spread",
       [](std::string& detail) {
         const ParetoArchive front =
             synthetic_front(FrontKind::kConcave, 10, 10.0);
         const BatchPrediction batch = table_batch(FrontKind::kConcave);
         double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
         for (const Variant v :
              {Variant::kBest, Variant::kAll, Variant::kOne,
               Variant::kWorst}) {
           const double p = qpoi_exact(batch, front, v);
           const double binom = std::sqrt(p * (1.0 - p) / 1e4);
           std::vector<double> xs;
           for (int s = 0; s < 20; ++s) {
             xs.push_back(
                 qpoi_monte_carlo(batch, front, 10000, 600 + s).get(v));
           }
           double mean = 0.0;
           for (double x : xs) mean += x;
           mean /= xs.size();
           double ss = 0.0;
           for (double x : xs) ss += (x - mean) * (x - mean);
           const double sd = std::sqrt(ss / (xs.size() - 1));
           lo = std::min(lo, sd / binom);
           hi = std::max(hi, sd / binom);
         }
         detail = "spread/binomial in [" + fmt(lo) + ", " +
                  fmt(hi) + "]";
         return lo >= 1.0 / 3.0 && hi <= 3.0;
       }},
      {"converges_to_exact",
       [](std::string& detail) {
         const ParetoArchive front =
             synthetic_front(FrontKind::kConcave, 10, 10.0);
         const BatchPrediction batch = table_batch(FrontKind::kConcave);
         const int n = 200000;
         const McEstimates e = qpoi_monte_carlo(batch, front, n, 8);
         double worst_sigmas = 0.0;
         for (const Variant v : kBatchVariants) {
           const double p = qpoi_exact(batch, front, v);
           const double sigma =
               std::max(std::sqrt(p * (1.0 - p) / n), 1e-6);
           worst_sigmas =
               std::max(worst_sigmas, std::abs(e.get(v) - p) / sigma);
         }
         detail =
             "largest deviation " + fmt(worst_sigmas) + " sigma";
         return worst_sigmas <= 5.0;
       }},
  };
}

int run_validate(const std::string& suite) {
  if (suite == "kernels") return run_properties(suite, kernel_properties());
  if (suite == "qpoi") return run_properties(suite, qpoi_properties());
  if (suite == "ordering")
    return run_properties(suite, ordering_properties());
  if (suite == "mc") return run_properties(suite, mc_properties());
  throw ConfigError("unknown suite '" + suite +
                    "' (expected kernels, qpoi, ordering or mc)");
}

// --------------------------------------------------------------------------
// speedtest: Table-style timing of the five exact variants plus the Monte
// Carlo estimator on the convex / concave reference configurations.

double mean_seconds(const std::function<double()>& eval, int reps) {
  // Size an inner loop so one repetition is long enough to time reliably.
  const double probe_start = now_seconds();
  volatile double sink = eval();
  const double probe = std::max(now_seconds() - probe_start, 1e-7);
  const int iters = std::clamp(static_cast<int>(0.005 / probe), 1, 100000);

  double total = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_seconds();
    for (int i = 0; i < iters; ++i) sink = eval();
    total += (now_seconds() - t0) / iters;
  }
  (void)sink;
  return total / reps;
}

int run_speedtest(const std::string& front, const std::vector<int>& sizes,
                  int reps, bool truncation, int n_sample) {
  std::vector<FrontKind> kinds;
  if (front.empty()) {
    kinds = {FrontKind::kConvex, FrontKind::kConcave};
  } else {
    kinds = {front_kind_from_string(front)};
  }

  std::printf("%-8s %6s  %10s %10s %10s %10s %10s %12s\n", "front", "|P|",
              "best", "all", "mean", "one", "worst",
              ("mc(" + std::to_string(n_sample) + ")").c_str());
  for (const FrontKind kind : kinds) {
    const BatchPrediction batch = table_batch(kind);
    for (const int n : sizes) {
      const ParetoArchive archive = synthetic_front(kind, n, 10.0);
      std::printf("%-8s %6d ", to_string(kind).c_str(), n);
      for (const Variant v : kBatchVariants) {
        const double ms =
            1e3 * mean_seconds(
                      [&] {
                        return qpoi_exact(batch, archive, v, truncation);
                      },
                      reps);
        std::printf(" %10.4f", ms);
      }
      std::uint64_t mc_seed = 0;
      const double mc_ms =
          1e3 * mean_seconds(
                    [&] {
                      return qpoi_monte_carlo(batch, archive, n_sample,
                                              mc_seed++)
                          .best;
                    },
                    reps);
      std::printf(" %12.3f\n", mc_ms);
    }
  }
  std::printf("times in ms (mean of %d repetitions, truncation %s)\n", reps,
              truncation ? "on" : "off");
  return 0;
}

// --------------------------------------------------------------------------
// run: full optimization via the experiment driver.

struct RunOptions {
  std::string problem = "zdt1";
  int dim = 5;
  std::string variant = "best";
  int q = 2;
  int reps = 1;
  std::uint64_t seed = 42;
  int budget_evals = 0;  // 0: resolved from the problem dimension
  int eta = 0;           // 0: resolved from the problem dimension
  std::string out = "qpoi_out";
  std::string mode = "exact";
  int n_sample = 100000;
  bool truncation = true;
  int optimizer_evals = 2500;
  int optimizer_restarts = 0;
  int refit_restarts = 2;
  int refit_evals = 100;
  std::vector<double> hv_ref;  // empty: problem default
};

int run_run(const RunOptions& opt) {
  ExperimentSpec spec;
  spec.problem = opt.problem;
  spec.dim = opt.dim;
  spec.variant = variant_from_string(opt.variant);
  spec.repetitions = opt.reps;
  for (int k = 0; k < opt.reps; ++k) {
    spec.seeds.push_back(opt.seed + static_cast<std::uint64_t>(k));
  }
  spec.out_dir = opt.out;

  spec.engine.eta = opt.eta;
  spec.engine.t_c = opt.budget_evals;
  spec.engine.q = opt.q;
  if (opt.mode == "exact") {
    spec.engine.acquisition.mode = AcquisitionMode::kExact;
  } else if (opt.mode == "monte_carlo") {
    spec.engine.acquisition.mode = AcquisitionMode::kMonteCarlo;
  } else {
    throw ConfigError("unknown mode '" + opt.mode +
                      "' (expected exact or monte_carlo)");
  }
  spec.engine.acquisition.n_sample = opt.n_sample;
  spec.engine.acquisition.truncation = opt.truncation;
  spec.engine.optimizer.max_evals = opt.optimizer_evals;
  spec.engine.optimizer.restarts = opt.optimizer_restarts;
  spec.engine.refit.restarts = opt.refit_restarts;
  spec.engine.refit.evals_per_restart = opt.refit_evals;
  if (opt.hv_ref.empty()) {
    spec.engine.hv_reference = default_hv_reference(opt.problem);
  } else {
    spec.engine.hv_reference = {opt.hv_ref[0], opt.hv_ref[1]};
  }

  std::printf("problem=%s d=%d variant=%s q=%d reps=%d seed=%llu\n",
              spec.problem.c_str(), spec.dim, to_string(spec.variant).c_str(),
              spec.engine.q, spec.repetitions,
              static_cast<unsigned long long>(opt.seed));
  const double t0 = now_seconds();
  const ExperimentResult result = run_experiment(spec);
  const double elapsed = now_seconds() - t0;

  for (std::size_t k = 0; k < result.final_hvs.size(); ++k) {
    const RunLog& log = result.logs[k];
    std::printf("rep %zu: seed=%llu evals=%d archive=%zu final_hv=%.6f\n", k,
                static_cast<unsigned long long>(spec.seeds[k]),
                log.records.back().evals, log.final_archive().size(),
                result.final_hvs[k]);
  }
  std::printf(
      "final hypervolume: min=%.6f median=%.6f mean=%.6f max=%.6f std=%.6f\n",
      result.final_hv.min, result.final_hv.median, result.final_hv.mean,
      result.final_hv.max, result.final_hv.stddev);
  std::printf("wrote %s (%.1f s)\n", result.summary_path.c_str(), elapsed);
  return 0;
}

}  // namespace
}  // namespace qpoi

int main(int argc, char** argv) {
  CLI::App app{
      "Batch bi-objective Bayesian optimization with exact multi-point "
      "probability-of-improvement acquisition functions"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Read options from a TOML file ([run] / [validate] / "
                 "[speedtest] sections); command-line flags take precedence");

  qpoi::RunOptions run_opt;
  CLI::App* run_cmd =
      app.add_subcommand("run", "Optimize a benchmark problem");
  run_cmd->fallthrough();
  run_cmd->add_option("--problem", run_opt.problem,
                      "Problem name (zdt1, zdt2, zdt3, linear, schaffer)")
      ->capture_default_str();
  run_cmd->add_option("--dim", run_opt.dim, "Decision-space dimension")
      ->capture_default_str();
  run_cmd->add_option("--variant", run_opt.variant,
                      "Acquisition variant (poi, all, one, best, worst, mean)")
      ->capture_default_str();
  run_cmd->add_option("--q", run_opt.q, "Batch size per iteration")
      ->capture_default_str();
  run_cmd->add_option("--reps", run_opt.reps, "Independent repetitions")
      ->capture_default_str();
  run_cmd->add_option("--seed", run_opt.seed,
                      "Base seed; repetition k uses seed + k")
      ->capture_default_str();
  run_cmd->add_option("--budget-evals", run_opt.budget_evals,
                      "Total true evaluations T_c (0 = auto)")
      ->capture_default_str();
  run_cmd->add_option("--eta", run_opt.eta,
                      "Initial design size (0 = auto: min(6d, 60))")
      ->capture_default_str();
  run_cmd->add_option("--out", run_opt.out, "Output directory")
      ->capture_default_str();
  run_cmd->add_option("--mode", run_opt.mode,
                      "Acquisition evaluation (exact or monte_carlo)")
      ->capture_default_str();
  run_cmd->add_option("--n-sample", run_opt.n_sample,
                      "Monte Carlo sample count (monte_carlo mode)")
      ->capture_default_str();
  run_cmd->add_flag("--truncation,!--no-truncation", run_opt.truncation,
                    "3-sigma stripe pruning during the engine loop")
      ->capture_default_str();
  run_cmd->add_option("--optimizer-evals", run_opt.optimizer_evals,
                      "Acquisition-optimizer evaluation budget per iteration "
                      "(0 = library auto)")
      ->capture_default_str();
  run_cmd->add_option("--optimizer-restarts", run_opt.optimizer_restarts,
                      "Extra acquisition-optimizer restarts")
      ->capture_default_str();
  run_cmd->add_option("--refit-restarts", run_opt.refit_restarts,
                      "Hyperparameter search restarts per refit")
      ->capture_default_str();
  run_cmd->add_option("--refit-evals", run_opt.refit_evals,
                      "Likelihood evaluations per refit restart")
      ->capture_default_str();
  run_cmd->add_option("--hv-ref", run_opt.hv_ref,
                      "Hypervolume reference point (two values; default per "
                      "problem)")
      ->expected(2);

  std::string suite;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Run a fast property suite");
  validate_cmd->fallthrough();
  validate_cmd
      ->add_option("--suite", suite,
                   "Suite name: kernels, qpoi, ordering or mc")
      ->required();

  std::string front;
  std::vector<int> sizes = {10, 100, 1000};
  int speed_reps = 10;
  bool speed_truncation = false;
  int speed_n_sample = 100000;
  CLI::App* speed_cmd = app.add_subcommand(
      "speedtest", "Time the acquisition variants on reference fronts");
  speed_cmd->fallthrough();
  speed_cmd->add_option("--front", front,
                        "Front kind (convex or concave; default both)");
  speed_cmd->add_option("--size", sizes, "Archive sizes to time")
      ->capture_default_str();
  speed_cmd->add_option("--reps", speed_reps, "Timing repetitions")
      ->capture_default_str();
  speed_cmd
      ->add_flag("--truncation,!--no-truncation", speed_truncation,
                 "Time with 3-sigma stripe pruning enabled")
      ->capture_default_str();
  speed_cmd->add_option("--n-sample", speed_n_sample,
                        "Monte Carlo sample count for the comparison column")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return qpoi::run_run(run_opt);
    if (validate_cmd->parsed()) return qpoi::run_validate(suite);
    return qpoi::run_speedtest(front, sizes, speed_reps, speed_truncation,
                               speed_n_sample);
  } catch (const qpoi::EngineAbort& e) {
    std::fprintf(stderr, "error: run aborted: %s (%zu records logged)\n",
                 e.what(), e.partial_log().records.size());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
