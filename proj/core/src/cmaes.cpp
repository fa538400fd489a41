#include "qpoi/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qpoi/errors.hpp"

namespace qpoi {
namespace {

constexpr int kMaxGenerationsPerRun = 2000;
constexpr int kResampleAttempts = 10;

struct EsState {
  // Standard CMA-ES working set (Hansen's tutorial formulation).
  Eigen::VectorXd mean;
  double sigma;
  Eigen::MatrixXd C;
  Eigen::VectorXd pc, ps;
  Eigen::MatrixXd B;
  Eigen::VectorXd D;  // sqrt of C's eigenvalues
};

}  // namespace

Eigen::VectorXd SearchBox::clip(Eigen::VectorXd x) const {
  for (int i = 0; i < dim(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
  return x;
}

bool SearchBox::contains(const Eigen::VectorXd& x) const {
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  }
  return true;
}

SearchBox SearchBox::replicated(int q) const {
  SearchBox out;
  out.lower.resize(q * dim());
  out.upper.resize(q * dim());
  for (int j = 0; j < q; ++j) {
    out.lower.segment(j * dim(), dim()) = lower;
    out.upper.segment(j * dim(), dim()) = upper;
  }
  return out;
}

void SearchBox::validate() const {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw ConfigError("search box has empty or mismatched bounds");
  }
  for (int i = 0; i < dim(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) ||
        !(lower[i] < upper[i])) {
      throw ConfigError("search box bounds must be finite with lower < upper");
    }
  }
}

int default_population(int dim) {
  return 4 + static_cast<int>(std::floor(3.0 * std::log(std::max(dim, 1))));
}

OptimResult maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                     const SearchBox& box, const OptimizerBudget& budget) {
  box.validate();
  const int n = box.dim();
  const int lambda = default_population(n);
  const int max_evals =
      budget.max_evals > 0 ? budget.max_evals : kMaxGenerationsPerRun * lambda;
  if (max_evals < lambda) {
    throw ConfigError("optimizer budget smaller than one population");
  }
  if (budget.restarts < 0) throw ConfigError("negative restart count");

  // Selection weights and adaptation constants.
  const int mu = lambda / 2;
  Eigen::VectorXd w(mu);
  for (int i = 0; i < mu; ++i) w[i] = std::log(mu + 0.5) - std::log(i + 1.0);
  w /= w.sum();
  const double mu_eff = 1.0 / w.squaredNorm();
  const double cs = (mu_eff + 2.0) / (n + mu_eff + 5.0);
  const double ds =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) + cs;
  const double cc = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
  const double c1 = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff);
  const double cmu = std::min(1.0 - c1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                             ((n + 2.0) * (n + 2.0) + mu_eff));
  const double chi_n =
      std::sqrt(static_cast<double>(n)) *
      (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  std::mt19937_64 rng(budget.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const Eigen::VectorXd widths = box.upper - box.lower;
  OptimResult best;
  best.value = -std::numeric_limits<double>::infinity();
  int evals = 0;

  auto eval = [&](const Eigen::VectorXd& x) {
    double v;
    try {
      v = objective(x);
    } catch (...) {
      std::throw_with_nested(NumericalError(
          "acquisition objective failed inside the inner optimizer"));
    }
    ++evals;
    if (v > best.value) {  // strict: ties keep the earlier incumbent
      best.value = v;
      best.argmax = x;
    }
    return v;
  };

  for (int run = 0; run <= budget.restarts && evals + lambda <= max_evals; ++run) {
    EsState st;
    st.mean.resize(n);
    for (int i = 0; i < n; ++i) st.mean[i] = box.lower[i] + unif(rng) * widths[i];
    st.sigma = 0.3 * widths.mean();
    st.C = Eigen::MatrixXd::Identity(n, n);
    st.pc = Eigen::VectorXd::Zero(n);
    st.ps = Eigen::VectorXd::Zero(n);
    st.B = Eigen::MatrixXd::Identity(n, n);
    st.D = Eigen::VectorXd::Ones(n);

    for (int gen = 0; gen < kMaxGenerationsPerRun && evals + lambda <= max_evals;
         ++gen) {
      std::vector<Eigen::VectorXd> zs(lambda), xs(lambda);
      std::vector<double> fs(lambda);
      for (int k = 0; k < lambda; ++k) {
        Eigen::VectorXd z(n), x(n);
        for (int attempt = 0;; ++attempt) {
          for (int i = 0; i < n; ++i) z[i] = gauss(rng);
          x = st.mean + st.sigma * (st.B * (st.D.asDiagonal() * z));
          if (box.contains(x) || attempt + 1 >= kResampleAttempts) break;
        }
        if (!box.contains(x)) {
          x = box.clip(x);
          // Keep z consistent with the clipped sample for the updates below.
          Eigen::VectorXd y = (x - st.mean) / st.sigma;
          z = st.D.cwiseInverse().asDiagonal() * (st.B.transpose() * y);
        }
        zs[k] = z;
        xs[k] = x;
        fs[k] = eval(x);
      }

      std::vector<int> order(lambda);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return fs[a] > fs[b]; });

      Eigen::VectorXd zw = Eigen::VectorXd::Zero(n);
      Eigen::VectorXd xw = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < mu; ++i) {
        zw += w[i] * zs[order[i]];
        xw += w[i] * xs[order[i]];
      }
      st.mean = xw;

      st.ps = (1.0 - cs) * st.ps +
              std::sqrt(cs * (2.0 - cs) * mu_eff) * (st.B * zw);
      const double ps_norm = st.ps.norm();
      const bool hsig =
          ps_norm / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * (gen + 1))) <
          (1.4 + 2.0 / (n + 1.0)) * chi_n;
      st.pc = (1.0 - cc) * st.pc;
      if (hsig) {
        st.pc += std::sqrt(cc * (2.0 - cc) * mu_eff) *
                 (st.B * (st.D.asDiagonal() * zw));
      }

      Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < mu; ++i) {
        const Eigen::VectorXd y = st.B * (st.D.asDiagonal() * zs[order[i]]);
        rank_mu += w[i] * y * y.transpose();
      }
      st.C = (1.0 - c1 - cmu) * st.C +
             c1 * (st.pc * st.pc.transpose() +
                   (hsig ? 0.0 : cc * (2.0 - cc)) * st.C) +
             cmu * rank_mu;
      st.sigma *= std::exp((cs / ds) * (ps_norm / chi_n - 1.0));

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
          0.5 * (st.C + st.C.transpose()));
      st.B = eig.eigenvectors();
      st.D = eig.eigenvalues().cwiseMax(1e-20).cwiseSqrt();

      // Collapse: the search distribution no longer moves at double
      // precision; stop this run and restart if budget remains.
      if (st.sigma * st.D.maxCoeff() < 1e-12 * widths.maxCoeff()) break;
      if (st.sigma > 1e6 * widths.maxCoeff()) break;
    }
  }

  if (best.argmax.size() == 0) {
    // Budget allowed no full generation; fall back to the box centre.
    best.argmax = 0.5 * (box.lower + box.upper);
    best.value = eval(best.argmax);
  }
  best.evals_used = evals;
  return best;
}

}  // namespace qpoi
