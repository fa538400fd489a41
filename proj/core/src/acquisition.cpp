#include "qpoi/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qpoi/errors.hpp"
#include "qpoi/prob_kernels.hpp"

namespace qpoi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Results may leave [0, 1] by at most this much before we treat them as a
// numerical failure instead of rounding noise.
constexpr double kResultSlack = 1e-10;
constexpr double kTruncationSigmas = 3.0;

double clamp_probability(double v, const char* what) {
  if (!(v >= -kResultSlack && v <= 1.0 + kResultSlack)) {
    throw NumericalError(std::string(what) +
                         ": result left [0, 1] beyond tolerance");
  }
  return std::min(1.0, std::max(0.0, v));
}

// Axis-aligned objective-space box; default is the whole plane.
struct Box2 {
  std::array<double, 2> lo{-kInf, -kInf};
  std::array<double, 2> hi{kInf, kInf};
};

Box2 point_box(const std::array<double, 2>& mu,
               const std::array<double, 2>& s) {
  Box2 b;
  for (int i = 0; i < 2; ++i) {
    b.lo[i] = mu[i] - kTruncationSigmas * s[i];
    b.hi[i] = mu[i] + kTruncationSigmas * s[i];
  }
  return b;
}

// True when the half-open stripe (lower, upper] cannot intersect the box.
bool stripe_outside(const Stripe& st, const Box2& box) {
  for (int i = 0; i < 2; ++i) {
    if (st.upper[i] < box.lo[i] || st.lower[i] >= box.hi[i]) return true;
  }
  return false;
}

std::array<double, 2> batch_column_mu(const BatchPrediction& batch, int j) {
  return {batch.M(0, j), batch.M(1, j)};
}

std::array<double, 2> batch_column_sd(const BatchPrediction& batch, int j) {
  return {batch.Lambda(0, j), batch.Lambda(1, j)};
}

// Joint law of objective i across the two batch points (q == 2 only).
BivariateGaussian pair_gaussian(const BatchPrediction& batch, int i) {
  BivariateGaussian g;
  g.mu = {batch.M(i, 0), batch.M(i, 1)};
  const Eigen::MatrixXd& S = batch.Sigma[i];
  g.sigma = {{{S(0, 0), S(0, 1)}, {S(1, 0), S(1, 1)}}};
  try {
    g.validate();
  } catch (const std::domain_error& e) {
    throw NumericalError(std::string("qpoi_exact: batch covariance invalid: ") +
                         e.what());
  }
  return g;
}

// P(both batch points improve): sum over ordered stripe pairs (j, jj) of the
// probability that point 1 falls in stripe j and point 2 in stripe jj,
// factored across the two independent objectives.
double all_pairs(const BatchPrediction& batch, const StripeSet& ss,
                 const std::array<BivariateGaussian, 2>& g, bool truncation) {
  const auto& st = ss.stripes;
  const int ns = static_cast<int>(st.size());
  std::array<std::vector<char>, 2> keep;
  for (int p = 0; p < 2; ++p) {
    keep[p].assign(ns, 1);
    if (truncation) {
      const Box2 b = point_box(batch_column_mu(batch, p),
                               batch_column_sd(batch, p));
      for (int j = 0; j < ns; ++j) {
        keep[p][j] = stripe_outside(st[j], b) ? 0 : 1;
      }
    }
  }
  double total = 0.0;
  for (int j = 0; j < ns; ++j) {
    if (!keep[0][j]) continue;
    for (int jj = 0; jj < ns; ++jj) {
      if (!keep[1][jj]) continue;
      double term = 1.0;
      for (int i = 0; i < 2 && term != 0.0; ++i) {
        term *= gamma_rect(st[j].lower[i], st[j].upper[i], st[jj].lower[i],
                           st[jj].upper[i], g[i]);
      }
      total += term;
    }
  }
  return total;
}

// P(the coordinatewise max (is_best) or min of the batch improves). Both
// composites factor across objectives, so each stripe contributes a product
// of one-dimensional interval probabilities of max/min of a correlated pair.
double composite_sum(const BatchPrediction& batch, const StripeSet& ss,
                     const std::array<BivariateGaussian, 2>& g, bool is_best,
                     bool truncation) {
  Box2 box;
  if (truncation) {
    const Box2 b0 = point_box(batch_column_mu(batch, 0),
                              batch_column_sd(batch, 0));
    const Box2 b1 = point_box(batch_column_mu(batch, 1),
                              batch_column_sd(batch, 1));
    for (int i = 0; i < 2; ++i) {
      box.lo[i] = std::min(b0.lo[i], b1.lo[i]);
      box.hi[i] = std::max(b0.hi[i], b1.hi[i]);
    }
  }
  const auto cdf = [&](double t, int i) {
    const double both = bvn_cdf(t, t, g[i]);
    if (is_best) return both;  // P(max <= t) = P(both <= t)
    return norm_cdf(t, batch.M(i, 0), batch.Lambda(i, 0)) +
           norm_cdf(t, batch.M(i, 1), batch.Lambda(i, 1)) - both;
  };
  double total = 0.0;
  for (const Stripe& st : ss.stripes) {
    if (truncation && stripe_outside(st, box)) continue;
    double term = 1.0;
    for (int i = 0; i < 2 && term != 0.0; ++i) {
      term *= std::max(0.0, cdf(st.upper[i], i) - cdf(st.lower[i], i));
    }
    total += term;
  }
  return total;
}

}  // namespace

Variant variant_from_string(const std::string& name) {
  if (name == "poi") return Variant::kPoi;
  if (name == "all") return Variant::kAll;
  if (name == "one") return Variant::kOne;
  if (name == "best") return Variant::kBest;
  if (name == "worst") return Variant::kWorst;
  if (name == "mean") return Variant::kMean;
  throw ConfigError("unknown acquisition variant '" + name +
                    "' (expected poi, all, one, best, worst or mean)");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::kPoi:
      return "poi";
    case Variant::kAll:
      return "all";
    case Variant::kOne:
      return "one";
    case Variant::kBest:
      return "best";
    case Variant::kWorst:
      return "worst";
    case Variant::kMean:
      return "mean";
  }
  throw ConfigError("unknown acquisition variant value");
}

double poi_single(const std::array<double, 2>& mu,
                  const std::array<double, 2>& s, const ParetoArchive& archive,
                  bool truncation) {
  for (int i = 0; i < 2; ++i) {
    if (!std::isfinite(mu[i]) || !(s[i] > 0.0) || !std::isfinite(s[i])) {
      throw std::domain_error(
          "poi_single: means must be finite and sds positive");
    }
  }
  const StripeSet ss = stripes(archive, {kInf, kInf});
  const Box2 box = truncation ? point_box(mu, s) : Box2{};
  double total = 0.0;
  for (const Stripe& st : ss.stripes) {
    if (truncation && stripe_outside(st, box)) continue;
    double term = 1.0;
    for (int i = 0; i < 2 && term != 0.0; ++i) {
      term *= std::max(0.0, norm_cdf(st.upper[i], mu[i], s[i]) -
                                norm_cdf(st.lower[i], mu[i], s[i]));
    }
    total += term;
  }
  return clamp_probability(total, "poi_single");
}

double qpoi_exact(const BatchPrediction& batch, const ParetoArchive& archive,
                  Variant variant, bool truncation) {
  batch.validate();
  if (batch.m() != 2) {
    throw ConfigError("qpoi_exact: bi-objective batches only");
  }
  const int q = batch.q();
  if (variant == Variant::kPoi) {
    if (q != 1) throw ConfigError("qpoi_exact: variant poi requires q == 1");
    return poi_single(batch_column_mu(batch, 0), batch_column_sd(batch, 0),
                      archive, truncation);
  }
  if (variant == Variant::kMean) {
    double total = 0.0;
    for (int j = 0; j < q; ++j) {
      total += poi_single(batch_column_mu(batch, j), batch_column_sd(batch, j),
                          archive, truncation);
    }
    return clamp_probability(total / q, "qpoi_exact(mean)");
  }
  if (q != 2) {
    throw ConfigError("qpoi_exact: variant " + to_string(variant) +
                      " requires q == 2 (use mean or Monte Carlo otherwise)");
  }
  const StripeSet ss = stripes(archive, {kInf, kInf});
  const std::array<BivariateGaussian, 2> g{pair_gaussian(batch, 0),
                                           pair_gaussian(batch, 1)};
  switch (variant) {
    case Variant::kAll:
      return clamp_probability(all_pairs(batch, ss, g, truncation),
                               "qpoi_exact(all)");
    case Variant::kOne: {
      // P(at least one improves) = poi_1 + poi_2 - P(both improve); the
      // terms reuse the exact code paths of mean and all so the identity
      // one + all == 2 * mean holds to rounding error.
      const double p1 = poi_single(batch_column_mu(batch, 0),
                                   batch_column_sd(batch, 0), archive,
                                   truncation);
      const double p2 = poi_single(batch_column_mu(batch, 1),
                                   batch_column_sd(batch, 1), archive,
                                   truncation);
      const double both = clamp_probability(all_pairs(batch, ss, g, truncation),
                                            "qpoi_exact(all)");
      return clamp_probability(p1 + p2 - both, "qpoi_exact(one)");
    }
    case Variant::kBest:
      return clamp_probability(composite_sum(batch, ss, g, true, truncation),
                               "qpoi_exact(best)");
    case Variant::kWorst:
      return clamp_probability(composite_sum(batch, ss, g, false, truncation),
                               "qpoi_exact(worst)");
    default:
      throw ConfigError("qpoi_exact: unsupported variant");
  }
}

double McEstimates::get(Variant v) const {
  switch (v) {
    case Variant::kAll:
      return all;
    case Variant::kOne:
      return one;
    case Variant::kBest:
      return best;
    case Variant::kWorst:
      return worst;
    case Variant::kMean:
    case Variant::kPoi:  // every variant coincides with poi when q == 1
      return mean;
  }
  throw ConfigError("McEstimates::get: unsupported variant");
}

McEstimates qpoi_monte_carlo(const BatchPrediction& batch,
                             const ParetoArchive& archive, int n_sample,
                             std::uint64_t seed) {
  batch.validate();
  if (batch.m() != 2) {
    throw ConfigError("qpoi_monte_carlo: bi-objective batches only");
  }
  if (n_sample < 1) {
    throw ConfigError("qpoi_monte_carlo: n_sample must be positive");
  }
  const int q = batch.q();
  // Per-objective sampling factors A with A * A^T = Sigma_i, via the
  // eigendecomposition so that semi-definite covariances are accepted.
  std::array<Eigen::MatrixXd, 2> A;
  for (int i = 0; i < 2; ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (batch.Sigma[i] + batch.Sigma[i].transpose()));
    Eigen::VectorXd ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (ev(0) < -1e-9 * scale) {
      throw NumericalError("qpoi_monte_carlo: indefinite batch covariance");
    }
    A[i] = es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd Y(2, q);
  Eigen::VectorXd z(q);
  long long c_best = 0, c_all = 0, c_improving = 0, c_one = 0, c_worst = 0;
  for (int t = 0; t < n_sample; ++t) {
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < q; ++k) z(k) = normal(rng);
      Y.row(i) = (batch.M.row(i).transpose() + A[i] * z).transpose();
    }
    int improving = 0;
    std::array<double, 2> cmax{-kInf, -kInf};
    std::array<double, 2> cmin{kInf, kInf};
    for (int j = 0; j < q; ++j) {
      const std::array<double, 2> y{Y(0, j), Y(1, j)};
      if (archive.improves(y)) ++improving;
      for (int i = 0; i < 2; ++i) {
        cmax[i] = std::max(cmax[i], y[i]);
        cmin[i] = std::min(cmin[i], y[i]);
      }
    }
    c_improving += improving;
    if (improving == q) ++c_all;
    if (improving >= 1) ++c_one;
    if (archive.improves(cmax)) ++c_best;
    if (archive.improves(cmin)) ++c_worst;
  }
  McEstimates est;
  const double n = static_cast<double>(n_sample);
  est.best = static_cast<double>(c_best) / n;
  est.all = static_cast<double>(c_all) / n;
  est.mean = static_cast<double>(c_improving) / (n * q);
  est.one = static_cast<double>(c_one) / n;
  est.worst = static_cast<double>(c_worst) / n;
  return est;
}

double evaluate(const AcquisitionConfig& config, const BatchPrediction& batch,
                const ParetoArchive& archive) {
  if (config.mode == AcquisitionMode::kExact) {
    return qpoi_exact(batch, archive, config.variant, config.truncation);
  }
  return qpoi_monte_carlo(batch, archive, config.n_sample, config.seed)
      .get(config.variant);
}

}  // namespace qpoi
