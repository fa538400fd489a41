#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "qpoi/gp.hpp"
#include "qpoi/pareto.hpp"

namespace qpoi {

// The six acquisition variants. kPoi is the classic single-point probability
// of improvement (q = 1); the other five aggregate a batch of q candidate
// points. For any batch the exact values obey
//   best <= all <= mean <= one <= worst,
// since the underlying events are nested sample by sample.
enum class Variant { kPoi, kAll, kOne, kBest, kWorst, kMean };

// Parses "poi", "all", "one", "best", "worst" or "mean"; throws ConfigError
// listing the valid names otherwise.
Variant variant_from_string(const std::string& name);
std::string to_string(Variant v);

enum class AcquisitionMode { kExact, kMonteCarlo };

struct AcquisitionConfig {
  Variant variant = Variant::kBest;
  AcquisitionMode mode = AcquisitionMode::kExact;
  int n_sample = 100000;     // Monte Carlo draws (kMonteCarlo only)
  std::uint64_t seed = 0;    // Monte Carlo stream seed (kMonteCarlo only)
  bool truncation = false;   // prune stripes outside the 3-sigma boxes
};

// Probability that a single bi-objective Gaussian prediction with mean mu and
// standard deviations s (both entries > 0) lands in the region improving on
// the archive. With truncation enabled, stripes disjoint from the point's
// 3-sigma box are skipped (absolute error bounded by the mass outside it).
double poi_single(const std::array<double, 2>& mu,
                  const std::array<double, 2>& s, const ParetoArchive& archive,
                  bool truncation = false);

// Exact value of the requested variant for a bi-objective batch prediction.
// kPoi requires q == 1 and kMean accepts any q >= 1; kAll/kOne/kBest/kWorst
// require q == 2 (the closed forms integrate bivariate normals). Throws
// ConfigError on unsupported shapes and NumericalError when a per-objective
// covariance is indefinite beyond tolerance or a result leaves [0, 1] by
// more than 1e-10 (smaller excursions are clamped).
double qpoi_exact(const BatchPrediction& batch, const ParetoArchive& archive,
                  Variant variant, bool truncation = false);

// All five batch estimates from one set of common random numbers, so the
// ordering chain above holds for the estimates as well. get(kPoi) returns
// the mean estimate (the variants coincide when q == 1).
struct McEstimates {
  double best = 0.0;
  double all = 0.0;
  double mean = 0.0;
  double one = 0.0;
  double worst = 0.0;

  double get(Variant v) const;
};

// Monte Carlo estimates for a bi-objective batch of any size q >= 1: draws
// n_sample joint realizations (per objective, a q-variate normal) from
// mt19937_64 seeded with `seed` and counts improvement events against the
// archive. Deterministic for a fixed seed on a given platform. Indefinite
// covariances beyond tolerance throw NumericalError.
McEstimates qpoi_monte_carlo(const BatchPrediction& batch,
                             const ParetoArchive& archive, int n_sample,
                             std::uint64_t seed);

// Dispatches on config.mode; truncation applies to the exact mode only.
double evaluate(const AcquisitionConfig& config, const BatchPrediction& batch,
                const ParetoArchive& archive);

}  // namespace qpoi
