#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qpoi/acquisition.hpp"
#include "qpoi/cmaes.hpp"
#include "qpoi/gp.hpp"
#include "qpoi/pareto.hpp"
#include "qpoi/problems.hpp"

namespace qpoi {

// Settings of one optimization run. Zero-valued eta / t_c resolve against
// the problem dimension d as eta = min(6d, 60) and
// t_c = min(9 eta, eta + 2 (200 - eta)).
struct EngineConfig {
  int eta = 0;  // DoE size (>= 2 after resolution)
  int t_c = 0;  // total true-evaluation budget (>= eta after resolution)
  int q = 2;    // batch size
  AcquisitionConfig acquisition{.variant = Variant::kBest,
                                .mode = AcquisitionMode::kExact,
                                .n_sample = 100000,
                                .seed = 0,
                                .truncation = true};
  OptimizerBudget optimizer{};
  std::array<double, 2> hv_reference{11.0, 11.0};
  std::uint64_t seed = 0;
  FitConfig refit{};  // warm start and seeds are managed per iteration
};

// One logged engine state: record 0 is the DoE (acq_value = NaN), each later
// record closes one batch iteration. Times are cumulative milliseconds since
// the run started; archives are snapshots after the record's evaluations.
struct RunRecord {
  int iter = 0;
  int evals = 0;
  double hv = 0.0;
  double acq_value = std::numeric_limits<double>::quiet_NaN();
  double wallclock_ms = 0.0;
  ParetoArchive archive;
};

struct RunLog {
  std::vector<RunRecord> records;

  const ParetoArchive& final_archive() const;
  double final_hv() const;
};

// Raised when a run fails mid-flight (objective threw or returned non-finite
// values, or refitting failed after jitter escalation); carries whatever was
// logged before the failure.
class EngineAbort : public std::runtime_error {
 public:
  EngineAbort(const std::string& what, RunLog partial);
  const RunLog& partial_log() const { return *log_; }

 private:
  std::shared_ptr<const RunLog> log_;
};

// eta x box.dim() Latin hypercube sample: per dimension, one point in each
// of eta equal-width strata, uniformly jittered, deterministic per seed.
Eigen::MatrixXd latin_hypercube(int eta, const SearchBox& box,
                                std::uint64_t seed);

// Runs the full Bayesian loop: Latin hypercube DoE of size eta, one
// surrogate per objective, then batches of q points chosen by maximizing
// the configured acquisition until the evaluation budget t_c is spent.
// Deterministic for a fixed config.seed. Throws ConfigError on inconsistent
// settings and EngineAbort on mid-run failures.
RunLog run(const Problem& problem, const EngineConfig& config);

}  // namespace qpoi
