#include "qpoi/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "qpoi/errors.hpp"

namespace qpoi {
namespace {

constexpr double kDuplicateTol = 1e-10;
constexpr double kJitterStart = 1e-10;  // relative to sigma2
constexpr double kJitterMax = 1e-4;

// Bounds of the hyperparameter search, relative to box widths / output
// variance.
constexpr double kThetaLo = 1e-3;
constexpr double kThetaHi = 1e3;
constexpr double kSigma2Lo = 1e-6;
constexpr double kSigma2Hi = 1e6;

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& theta) {
  const int n = static_cast<int>(X.rows());
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i) {
    R(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      double e = 0.0;
      for (int k = 0; k < X.cols(); ++k) {
        const double t = (X(i, k) - X(j, k)) / theta[k];
        e += t * t;
      }
      R(i, j) = R(j, i) = std::exp(-0.5 * e);
    }
  }
  return R;
}

struct Factorized {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double trend{0.0};
  Eigen::VectorXd alpha;
  double log_lik{0.0};
  double jitter{0.0};
  bool ok{false};
};

// Factorizes K = sigma2 R + jitter I, estimates the constant trend by GLS
// and evaluates the log marginal likelihood. Escalates jitter by 10x up to
// kJitterMax*sigma2 when the factorization fails.
Factorized factorize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const Kernel& k, double jitter_scale) {
  Factorized f;
  const int n = static_cast<int>(X.rows());
  const Eigen::MatrixXd R = correlation_matrix(X, k.theta);
  for (double rel = kJitterStart * jitter_scale; rel <= kJitterMax;
       rel *= 10.0) {
    Eigen::MatrixXd K = k.sigma2 * R;
    K.diagonal().array() += rel * k.sigma2;
    f.llt.compute(K);
    if (f.llt.info() != Eigen::Success) continue;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd Kiy = f.llt.solve(y);
    const Eigen::VectorXd Ki1 = f.llt.solve(ones);
    const double denom = ones.dot(Ki1);
    f.trend = denom > 0.0 ? ones.dot(Kiy) / denom : y.mean();
    const Eigen::VectorXd resid = y.array() - f.trend;
    f.alpha = f.llt.solve(resid);
    double log_det = 0.0;
    for (int i = 0; i < n; ++i) log_det += std::log(f.llt.matrixLLT()(i, i));
    f.log_lik = -0.5 * resid.dot(f.alpha) - log_det -
                0.5 * n * std::log(2.0 * std::numbers::pi);
    f.jitter = rel * k.sigma2;
    f.ok = true;
    return f;
  }
  return f;
}

}  // namespace

double Kernel::operator()(const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b) const {
  double e = 0.0;
  for (int i = 0; i < theta.size(); ++i) {
    const double t = (a[i] - b[i]) / theta[i];
    e += t * t;
  }
  return sigma2 * std::exp(-0.5 * e);
}

void Kernel::validate() const {
  if (!(sigma2 > 0.0)) throw std::domain_error("kernel sigma2 must be positive");
  for (int i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > 0.0)) {
      throw std::domain_error("kernel length-scales must be positive");
    }
  }
}

void BatchPrediction::validate() const {
  if (static_cast<int>(Sigma.size()) != m() || Lambda.rows() != m() ||
      Lambda.cols() != q()) {
    throw ConfigError("batch prediction with inconsistent shapes");
  }
  for (int i = 0; i < m(); ++i) {
    if (Sigma[i].rows() != q() || Sigma[i].cols() != q()) {
      throw ConfigError("batch covariance of wrong size");
    }
    for (int a = 0; a < q(); ++a) {
      for (int b = 0; b < q(); ++b) {
        if (std::abs(Sigma[i](a, b) - Sigma[i](b, a)) > 1e-10) {
          throw std::domain_error("batch covariance not symmetric");
        }
      }
      if (std::abs(Lambda(i, a) * Lambda(i, a) - Sigma[i](a, a)) >
          1e-12 * std::max(1.0, std::abs(Sigma[i](a, a)))) {
        throw std::domain_error("Lambda inconsistent with Sigma diagonal");
      }
    }
  }
}

BatchPrediction BatchPrediction::from_moments(const Eigen::MatrixXd& M,
                                              const Eigen::MatrixXd& Lambda,
                                              const std::array<double, 2>& rho) {
  if (M.rows() != 2 || Lambda.rows() != 2 || M.cols() != Lambda.cols()) {
    throw ConfigError("from_moments expects 2 x q mean and sd matrices");
  }
  const int q = static_cast<int>(M.cols());
  BatchPrediction bp;
  bp.M = M;
  bp.Lambda = Lambda;
  for (int i = 0; i < 2; ++i) {
    Eigen::MatrixXd S(q, q);
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        S(a, b) = (a == b) ? Lambda(i, a) * Lambda(i, a)
                           : rho[i] * Lambda(i, a) * Lambda(i, b);
      }
    }
    bp.Sigma.push_back(std::move(S));
  }
  bp.validate();
  return bp;
}

SurrogateModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const SearchBox& box, const FitConfig& config) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  box.validate();
  if (n < 2) throw std::domain_error("fit requires at least two rows");
  if (y.size() != n) throw std::domain_error("fit: |y| != rows of X");
  if (d != box.dim()) throw std::domain_error("fit: X and box dimension differ");
  for (int i = 0; i < n; ++i) {
    if (!box.contains(X.row(i).transpose())) {
      throw std::domain_error("fit: training row outside the search box");
    }
    for (int j = 0; j < i; ++j) {
      if ((X.row(i) - X.row(j)).cwiseAbs().maxCoeff() <= kDuplicateTol) {
        throw DuplicateRowsError("fit: duplicate training rows");
      }
    }
  }

  const double vy = std::max((y.array() - y.mean()).square().sum() / n, 1e-12);

  // Joint log-space search over (theta_1..theta_d, sigma2) with a bounded
  // derivative-free maximizer; multi-start plus optional warm start.
  SearchBox logspace;
  logspace.lower.resize(d + 1);
  logspace.upper.resize(d + 1);
  for (int i = 0; i < d; ++i) {
    logspace.lower[i] = std::log(kThetaLo * box.width(i));
    logspace.upper[i] = std::log(kThetaHi * box.width(i));
  }
  logspace.lower[d] = std::log(kSigma2Lo * vy);
  logspace.upper[d] = std::log(kSigma2Hi * vy);

  auto kernel_at = [&](const Eigen::VectorXd& p) {
    Kernel k;
    k.theta = p.head(d).array().exp();
    k.sigma2 = std::exp(p[d]);
    return k;
  };
  auto objective = [&](const Eigen::VectorXd& p) {
    const Factorized f = factorize(X, y, kernel_at(p), config.jitter_scale);
    return f.ok ? f.log_lik : -std::numeric_limits<double>::infinity();
  };

  const int evals = config.evals_per_restart > 0 ? config.evals_per_restart
                                                 : 40 * (d + 1);
  Eigen::VectorXd best_p;
  double best_ll = -std::numeric_limits<double>::infinity();
  int start = 0;
  if (config.warm_start) {
    Eigen::VectorXd p(d + 1);
    for (int i = 0; i < d; ++i) p[i] = std::log(config.warm_start->theta[i]);
    p[d] = std::log(config.warm_start->sigma2);
    p = logspace.clip(p);
    OptimizerBudget b{evals, 0, config.seed};
    // The warm start competes directly as an incumbent candidate and its
    // ES run replaces the first random restart.
    const double warm_ll = objective(p);
    if (warm_ll > best_ll) {
      best_ll = warm_ll;
      best_p = p;
    }
    OptimResult r = maximize(objective, logspace, b);
    if (r.value > best_ll) {
      best_ll = r.value;
      best_p = r.argmax;
    }
    start = 1;
  }
  for (int s = start; s < std::max(config.restarts, 1); ++s) {
    OptimizerBudget b{evals, 0, config.seed + 0x51ed2701ull * (s + 1)};
    OptimResult r = maximize(objective, logspace, b);
    if (r.value > best_ll) {
      best_ll = r.value;
      best_p = r.argmax;
    }
  }
  if (best_p.size() == 0) {
    throw NumericalError("fit: likelihood search failed everywhere");
  }

  SurrogateModel model;
  model.X = X;
  model.y = y;
  model.box = box;
  model.kernel = kernel_at(best_p);
  const Factorized f = factorize(X, y, model.kernel, config.jitter_scale);
  if (!f.ok) {
    throw NumericalError("fit: Cholesky failed after full jitter escalation");
  }
  model.chol = f.llt.matrixL();
  model.alpha = f.alpha;
  model.trend = f.trend;
  model.jitter = f.jitter;
  return model;
}

PointPosterior posterior_point(const SurrogateModel& model,
                               const Eigen::VectorXd& x) {
  const int n = model.n();
  Eigen::VectorXd k(n);
  for (int i = 0; i < n; ++i) {
    k[i] = model.kernel(model.X.row(i).transpose(), x);
  }
  PointPosterior out;
  out.mu = model.trend + k.dot(model.alpha);
  const Eigen::VectorXd v =
      model.chol.triangularView<Eigen::Lower>().solve(k);
  out.s2 = std::clamp(model.kernel.sigma2 - v.squaredNorm(), 0.0,
                      model.kernel.sigma2);
  return out;
}

BatchPrediction posterior_batch(const std::vector<SurrogateModel>& models,
                                const Eigen::MatrixXd& Xq) {
  const int m = static_cast<int>(models.size());
  const int q = static_cast<int>(Xq.rows());
  if (m == 0 || q == 0) throw ConfigError("posterior_batch: empty input");
  for (const auto& mod : models) {
    if (mod.X.rows() != models[0].X.rows() ||
        mod.X.cols() != models[0].X.cols() ||
        (mod.X - models[0].X).cwiseAbs().maxCoeff() > 0.0) {
      throw ConfigError("posterior_batch: models fitted on different inputs");
    }
  }

  BatchPrediction bp;
  bp.M.resize(m, q);
  bp.Lambda.resize(m, q);
  for (int i = 0; i < m; ++i) {
    const SurrogateModel& mod = models[i];
    const int n = mod.n();
    Eigen::MatrixXd Ks(n, q);
    Eigen::MatrixXd Kq(q, q);
    for (int a = 0; a < q; ++a) {
      const Eigen::VectorXd xa = Xq.row(a).transpose();
      for (int r = 0; r < n; ++r) {
        Ks(r, a) = mod.kernel(mod.X.row(r).transpose(), xa);
      }
      for (int b = 0; b <= a; ++b) {
        Kq(a, b) = Kq(b, a) = mod.kernel(xa, Xq.row(b).transpose());
      }
      bp.M(i, a) = mod.trend + Ks.col(a).dot(mod.alpha);
    }
    const Eigen::MatrixXd V =
        mod.chol.triangularView<Eigen::Lower>().solve(Ks);
    Eigen::MatrixXd S = Kq - V.transpose() * V;
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
    if (eig.eigenvalues().minCoeff() < 0.0) {
      // Rounding can push the smallest eigenvalue a hair below zero; project
      // back onto the PSD cone.
      S = eig.eigenvectors() *
          eig.eigenvalues().cwiseMax(0.0).asDiagonal() *
          eig.eigenvectors().transpose();
      S = 0.5 * (S + S.transpose());
    }
    for (int a = 0; a < q; ++a) {
      S(a, a) = std::max(S(a, a), 0.0);
      bp.Lambda(i, a) = std::sqrt(S(a, a));
    }
    bp.Sigma.push_back(std::move(S));
  }
  return bp;
}

}  // namespace qpoi
