#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "qpoi/cmaes.hpp"

namespace qpoi {

// Gaussian (RBF) covariance k(x,x') = sigma2 * exp(-sum_i (x_i-x'_i)^2 /
// (2 theta_i^2)) with one length-scale per input dimension.
struct Kernel {
  double sigma2{1.0};
  Eigen::VectorXd theta;

  double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  void validate() const;  // throws std::domain_error on nonpositive entries
};

// Hyperparameter search effort for fit(). The defaults are the full
// multi-start search; the engine passes a lighter configuration with a warm
// start when refitting every iteration.
struct FitConfig {
  int restarts{10};
  int evals_per_restart{0};  // 0: auto (40 * (d+1))
  std::uint64_t seed{0x9e3779b97f4a7c15ull};
  std::optional<Kernel> warm_start;  // used as an extra first restart
  double jitter_scale{1.0};          // multiplies the initial jitter
};

// One fitted noise-free Gaussian process (ordinary Kriging: constant trend
// estimated by generalized least squares). Immutable after fit; posterior
// queries are pure.
struct SurrogateModel {
  Eigen::MatrixXd X;     // n x d training inputs
  Eigen::VectorXd y;     // n training outputs
  SearchBox box;         // declared search box containing all rows of X
  Kernel kernel;
  Eigen::MatrixXd chol;  // lower factor L with L L^T = K + jitter I
  Eigen::VectorXd alpha; // solves (K + jitter I) alpha = y - trend
  double trend{0.0};
  double jitter{0.0};

  int n() const { return static_cast<int>(X.rows()); }
  int d() const { return static_cast<int>(X.cols()); }
};

// Joint posterior of m independent objective models at a batch of q points:
// mean matrix M (m x q), one q x q covariance per objective, and the
// standard-deviation matrix Lambda (sqrt of the Sigma diagonals).
// Cross-objective covariances are not represented (objectives independent).
struct BatchPrediction {
  Eigen::MatrixXd M;
  std::vector<Eigen::MatrixXd> Sigma;
  Eigen::MatrixXd Lambda;

  int m() const { return static_cast<int>(M.rows()); }
  int q() const { return static_cast<int>(M.cols()); }
  void validate() const;

  // Builds a bi-objective batch prediction directly from moments: M and
  // Lambda are 2 x q (rows = objectives), rho[i] is the common pairwise
  // correlation of objective i across the batch (q = 2 for nonzero rho).
  static BatchPrediction from_moments(const Eigen::MatrixXd& M,
                                      const Eigen::MatrixXd& Lambda,
                                      const std::array<double, 2>& rho);
};

// Maximum-likelihood fit of the RBF model on (X, y). Throws
// DuplicateRowsError when two rows of X coincide within 1e-10 per
// coordinate, std::domain_error when a row leaves the box, NumericalError
// when the Cholesky fails after full jitter escalation.
SurrogateModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const SearchBox& box, const FitConfig& config = {});

// Posterior mean and variance at a single point; variance clamped to
// [0, sigma2]. Points outside the box are allowed (extrapolation).
struct PointPosterior {
  double mu{0.0};
  double s2{0.0};
};
PointPosterior posterior_point(const SurrogateModel& model,
                               const Eigen::VectorXd& x);

// Joint posterior over the batch Xq (q x d) for all models. Each Sigma_i is
// symmetrized and eigenvalue-floored at 0 if rounding made it indefinite.
// Throws ConfigError when the models were not fitted on identical training
// sets.
BatchPrediction posterior_batch(const std::vector<SurrogateModel>& models,
                                const Eigen::MatrixXd& Xq);

}  // namespace qpoi
