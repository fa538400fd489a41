#include "qpoi/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <utility>

#include "qpoi/errors.hpp"

namespace qpoi {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since)
      .count();
}

// Counter-indexed splitmix64 stream: decorrelated sub-seeds from one master
// seed so that DoE, optimizer, refits and perturbations stay independent.
std::uint64_t sub_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + (stream + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Resolved {
  int eta = 0;
  int t_c = 0;
};

Resolved resolve_budgets(const Problem& problem, const EngineConfig& config) {
  Resolved r;
  r.eta = config.eta > 0 ? config.eta : std::min(6 * problem.d, 60);
  r.t_c = config.t_c > 0 ? config.t_c
                         : std::min(9 * r.eta, r.eta + 2 * (200 - r.eta));
  if (r.eta < 2) throw ConfigError("run: eta must be >= 2");
  if (r.t_c < r.eta) throw ConfigError("run: t_c must be >= eta");
  return r;
}

void validate_shape(const Problem& problem, const EngineConfig& config) {
  if (problem.d < 1 || !problem.evaluate) {
    throw ConfigError("run: problem must define d >= 1 and an objective");
  }
  if (problem.m != 2) {
    throw ConfigError("run: only bi-objective problems are supported");
  }
  problem.box.validate();
  if (problem.box.dim() != problem.d) {
    throw ConfigError("run: box dimension does not match problem.d");
  }
  if (config.q < 1) throw ConfigError("run: q must be >= 1");
  if (!std::isfinite(config.hv_reference[0]) ||
      !std::isfinite(config.hv_reference[1])) {
    throw ConfigError("run: hv_reference must be finite");
  }
  if (config.acquisition.mode == AcquisitionMode::kExact) {
    const Variant v = config.acquisition.variant;
    if (v == Variant::kPoi && config.q != 1) {
      throw ConfigError("run: variant poi requires q == 1");
    }
    if (v != Variant::kPoi && v != Variant::kMean && config.q != 2) {
      throw ConfigError("run: exact variant " + to_string(v) +
                        " requires q == 2");
    }
  }
}

std::array<double, 2> checked_eval(const Problem& problem,
                                   const Eigen::VectorXd& x, RunLog& log) {
  std::array<double, 2> f;
  try {
    f = problem.evaluate(x);
  } catch (const std::exception& e) {
    throw EngineAbort(
        "run: objective '" + problem.name + "' failed: " + e.what(), log);
  }
  if (!std::isfinite(f[0]) || !std::isfinite(f[1])) {
    throw EngineAbort(
        "run: objective '" + problem.name + "' returned a non-finite value",
        log);
  }
  return f;
}

// Refit with a one-shot jitter escalation before giving up, per the engine's
// failure contract.
SurrogateModel fit_with_retry(const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y, const SearchBox& box,
                              FitConfig fc, RunLog& log) {
  try {
    return fit(X, y, box, fc);
  } catch (const DuplicateRowsError& e) {
    throw EngineAbort(std::string("run: refit failed: ") + e.what(), log);
  } catch (const NumericalError&) {
    fc.jitter_scale *= 1e4;
    try {
      return fit(X, y, box, fc);
    } catch (const std::exception& e) {
      throw EngineAbort(
          std::string("run: refit failed after jitter escalation: ") +
              e.what(),
          log);
    }
  }
}

}  // namespace

const ParetoArchive& RunLog::final_archive() const {
  if (records.empty()) {
    throw std::runtime_error("RunLog: no records");
  }
  return records.back().archive;
}

double RunLog::final_hv() const {
  if (records.empty()) {
    throw std::runtime_error("RunLog: no records");
  }
  return records.back().hv;
}

EngineAbort::EngineAbort(const std::string& what, RunLog partial)
    : std::runtime_error(what),
      log_(std::make_shared<const RunLog>(std::move(partial))) {}

Eigen::MatrixXd latin_hypercube(int eta, const SearchBox& box,
                                std::uint64_t seed) {
  if (eta < 1) throw ConfigError("latin_hypercube: eta must be >= 1");
  box.validate();
  const int d = box.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd X(eta, d);
  std::vector<int> strata(eta);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < eta; ++i) strata[i] = i;
    std::shuffle(strata.begin(), strata.end(), rng);
    for (int i = 0; i < eta; ++i) {
      const double u = (strata[i] + unit(rng)) / eta;
      X(i, j) = box.lower[j] + box.width(j) * u;
    }
  }
  return X;
}

RunLog run(const Problem& problem, const EngineConfig& config) {
  validate_shape(problem, config);
  const Resolved budgets = resolve_budgets(problem, config);
  const int d = problem.d;
  const int q = config.q;

  const Clock::time_point t0 = Clock::now();
  RunLog log;

  // Design of experiments.
  Eigen::MatrixXd X = latin_hypercube(budgets.eta, problem.box,
                                      sub_seed(config.seed, 0));
  Eigen::MatrixXd Y(budgets.eta, 2);
  ParetoArchive archive;
  for (int i = 0; i < budgets.eta; ++i) {
    const std::array<double, 2> f =
        checked_eval(problem, X.row(i).transpose(), log);
    Y(i, 0) = f[0];
    Y(i, 1) = f[1];
    archive.insert(f);
  }
  int evals = budgets.eta;
  log.records.push_back({0, evals, hypervolume_2d(archive, config.hv_reference),
                         std::numeric_limits<double>::quiet_NaN(),
                         elapsed_ms(t0), archive});

  auto fit_all = [&](int iteration,
                     const std::vector<SurrogateModel>* previous) {
    std::vector<SurrogateModel> models;
    models.reserve(2);
    for (int i = 0; i < 2; ++i) {
      FitConfig fc = config.refit;
      fc.seed = sub_seed(config.seed, 10000 + 2 * iteration + i);
      if (previous) fc.warm_start = (*previous)[i].kernel;
      models.push_back(fit_with_retry(X, Y.col(i), problem.box, fc, log));
    }
    return models;
  };
  std::vector<SurrogateModel> models = fit_all(0, nullptr);

  std::mt19937_64 perturb_rng(sub_seed(config.seed, 1));
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  const SearchBox joint_box = problem.box.replicated(q);

  int iter = 0;
  while (evals + q <= budgets.t_c) {
    ++iter;

    // Acquisition landscape over the flattened batch (row-major q x d).
    const auto acquisition_value = [&](const Eigen::VectorXd& v) {
      Eigen::MatrixXd Xq(q, d);
      for (int j = 0; j < q; ++j) {
        Xq.row(j) = v.segment(j * d, d).transpose();
      }
      BatchPrediction bp = posterior_batch(models, Xq);
      for (int i = 0; i < 2; ++i) {
        // Floor predictive sds so fully-explained points keep the
        // acquisition total (archive members have zero posterior variance).
        const double floor = 1e-9 * std::sqrt(models[i].kernel.sigma2);
        for (int j = 0; j < q; ++j) {
          if (bp.Lambda(i, j) < floor) {
            bp.Lambda(i, j) = floor;
            bp.Sigma[i](j, j) = floor * floor;
          }
        }
      }
      return evaluate(config.acquisition, bp, archive);
    };

    OptimizerBudget ob = config.optimizer;
    ob.seed = sub_seed(config.seed, 100 + iter);
    OptimResult best;
    try {
      best = maximize(acquisition_value, joint_box, ob);
    } catch (const std::exception& e) {
      throw EngineAbort(std::string("run: acquisition maximization failed: ") +
                            e.what(),
                        log);
    }

    // Batch = argmax reshaped to q x d; rows colliding with existing data
    // (within 1e-8) are nudged by 1e-6 of the box width, since the
    // noise-free surrogate cannot absorb duplicate rows.
    Eigen::MatrixXd batch(q, d);
    for (int j = 0; j < q; ++j) {
      batch.row(j) = best.argmax.segment(j * d, d).transpose();
    }
    const auto collides = [&](const Eigen::RowVectorXd& row, int upto) {
      for (int r = 0; r < X.rows(); ++r) {
        if ((X.row(r) - row).cwiseAbs().maxCoeff() <= 1e-8) return true;
      }
      for (int r = 0; r < upto; ++r) {
        if ((batch.row(r) - row).cwiseAbs().maxCoeff() <= 1e-8) return true;
      }
      return false;
    };
    for (int j = 0; j < q; ++j) {
      for (int attempt = 0; attempt < 16 && collides(batch.row(j), j);
           ++attempt) {
        Eigen::VectorXd x = batch.row(j).transpose();
        for (int k = 0; k < d; ++k) {
          x[k] += noise(perturb_rng) * 1e-6 * problem.box.width(k);
        }
        batch.row(j) = problem.box.clip(x).transpose();
      }
    }

    const int old_n = static_cast<int>(X.rows());
    X.conservativeResize(old_n + q, Eigen::NoChange);
    Y.conservativeResize(old_n + q, Eigen::NoChange);
    for (int j = 0; j < q; ++j) {
      const std::array<double, 2> f =
          checked_eval(problem, batch.row(j).transpose(), log);
      X.row(old_n + j) = batch.row(j);
      Y(old_n + j, 0) = f[0];
      Y(old_n + j, 1) = f[1];
      archive.insert(f);
    }
    evals += q;

    log.records.push_back({iter, evals,
                           hypervolume_2d(archive, config.hv_reference),
                           best.value, elapsed_ms(t0), archive});

    if (evals + q <= budgets.t_c) {
      models = fit_all(iter, &models);
    }
  }
  return log;
}

}  // namespace qpoi
