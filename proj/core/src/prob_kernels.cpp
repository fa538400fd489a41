#include "qpoi/prob_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qpoi/errors.hpp"

namespace qpoi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gauss-Legendre abscissae/weights on [-1, 1] (positive half; the rule is
// symmetric). 6-, 12- and 20-point sets, selected by |rho| as in the
// Drezner-Wesolowsky / Genz bivariate normal quadrature.
constexpr double kGlX6[3] = {0.93246951420315205, 0.66120938646626448,
                             0.23861918608319693};
constexpr double kGlW6[3] = {0.17132449237916975, 0.36076157304813894,
                             0.46791393457269137};
constexpr double kGlX12[6] = {0.98156063424671924, 0.9041172563704748,
                              0.76990267419430469, 0.58731795428661748,
                              0.36783149899818018, 0.12523340851146891};
constexpr double kGlW12[6] = {0.047175336386512022, 0.10693932599531888,
                              0.16007832854334611,  0.20316742672306565,
                              0.23349253653835464,  0.24914704581340269};
constexpr double kGlX20[10] = {0.99312859918509488, 0.96397192727791381,
                               0.91223442825132584, 0.83911697182221878,
                               0.7463319064601508,  0.63605368072651502,
                               0.51086700195082713, 0.37370608871541955,
                               0.2277858511416451,  0.076526521133497338};
constexpr double kGlW20[10] = {0.017614007139153273, 0.040601429800386217,
                               0.062672048334109443, 0.083276741576704671,
                               0.10193011981724026,  0.11819453196151825,
                               0.13168863844917653,  0.14209610931838187,
                               0.14917298647260366,  0.15275338713072578};

double phid(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// P(X > h, Y > k) for the standard bivariate normal with correlation r and
// finite h, k. Gauss-Legendre quadrature over the Drezner-Wesolowsky
// correlation transform; for |r| > 0.925 the Genz tail transform keeps the
// integrand benign. Maximum absolute error around 5e-16 with the 20-point
// rule.
double bvn_upper(double h, double k, double r) {
  const double* gx;
  const double* gw;
  int ng;
  const double ar = std::abs(r);
  if (ar < 0.3) {
    gx = kGlX6, gw = kGlW6, ng = 3;
  } else if (ar < 0.75) {
    gx = kGlX12, gw = kGlW12, ng = 6;
  } else {
    gx = kGlX20, gw = kGlW20, ng = 10;
  }

  double hk = h * k;
  double acc = 0.0;
  if (ar < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = std::asin(r);
    for (int i = 0; i < ng; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double sn = std::sin(0.5 * asr * (1.0 + sgn * gx[i]));
        acc += gw[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return acc * asr / (2.0 * kTwoPi) + phid(-h) * phid(-k);
  }

  // Tail branch. Reduce r < 0 to the positive-correlation integral through
  // Y -> -Y, then undo the reflection at the end.
  double kk = k;
  if (r < 0.0) {
    kk = -k;
    hk = -hk;
  }
  if (ar < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - kk) * (h - kk);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr = -0.5 * (bs / as + hk);
    if (asr > -100.0) {
      acc = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
             c * d * as * as / 5.0);
    }
    if (-hk < 100.0) {
      const double b = std::sqrt(bs);
      const double sp = std::sqrt(kTwoPi) * phid(-b / a);
      acc -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a *= 0.5;
    for (int i = 0; i < ng; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double x = a * (1.0 + sgn * gx[i]);
        const double xs = x * x;
        asr = -0.5 * (bs / xs + hk);
        if (asr > -100.0) {
          const double rs = std::sqrt(1.0 - xs);
          const double sp = 1.0 + c * xs * (1.0 + d * xs);
          const double ep = std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
          acc += a * gw[i] * std::exp(asr) * (ep - sp);
        }
      }
    }
    acc = -acc / kTwoPi;
  }
  if (r > 0.0) {
    acc += phid(-std::max(h, kk));
  } else {
    acc = -acc;
    if (kk > h) acc += phid(kk) - phid(h);
  }
  return std::clamp(acc, 0.0, 1.0);
}

// P(X <= h, Y <= k), standardized bounds (possibly infinite).
double bvn_lower_std(double h, double k, double r) {
  if (h == -kInf || k == -kInf) return 0.0;
  if (h == kInf && k == kInf) return 1.0;
  if (h == kInf) return phid(k);
  if (k == kInf) return phid(h);
  if (std::abs(r) >= 1.0 - 1e-9) {
    // Degenerate mass on a line: Y = X for r -> 1, Y = -X for r -> -1.
    if (r > 0.0) return phid(std::min(h, k));
    return std::max(0.0, phid(h) + phid(k) - 1.0);
  }
  return bvn_upper(-h, -k, r);
}

double standardize(double x, double mu, double s) {
  if (x == kInf || x == -kInf) return x;
  return (x - mu) / s;
}

}  // namespace

void BivariateGaussian::validate() const {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (!(sigma[i][j] == sigma[i][j])) {
        throw std::domain_error("bivariate covariance contains NaN");
      }
    }
  }
  const double scale = std::max({std::abs(sigma[0][0]), std::abs(sigma[1][1]), 1.0});
  if (std::abs(sigma[0][1] - sigma[1][0]) > 1e-9 * scale) {
    throw std::domain_error("bivariate covariance is not symmetric");
  }
  if (sigma[0][0] < 0.0 || sigma[1][1] < 0.0) {
    throw std::domain_error("bivariate covariance has a negative variance");
  }
  const double det = sigma[0][0] * sigma[1][1] - sigma[0][1] * sigma[1][0];
  if (det < -1e-12 * scale * scale) {
    throw std::domain_error("bivariate covariance is not PSD within tolerance");
  }
}

double BivariateGaussian::rho() const {
  const double v1 = sigma[0][0];
  const double v2 = sigma[1][1];
  if (v1 <= 0.0 || v2 <= 0.0) {
    throw std::domain_error("correlation requires positive variances");
  }
  return std::clamp(sigma[0][1] / std::sqrt(v1 * v2), -1.0, 1.0);
}

BivariateGaussian BivariateGaussian::standard(double rho) {
  return {{0.0, 0.0}, {{{1.0, rho}, {rho, 1.0}}}};
}

BivariateGaussian BivariateGaussian::from_moments(double mu1, double mu2,
                                                  double s1, double s2,
                                                  double rho) {
  const double cov = rho * s1 * s2;
  return {{mu1, mu2}, {{{s1 * s1, cov}, {cov, s2 * s2}}}};
}

double norm_pdf(double x, double mu, double s) {
  if (!(s > 0.0)) throw std::domain_error("norm_pdf requires s > 0");
  const double z = (x - mu) / s;
  return std::exp(-0.5 * z * z) / (s * std::sqrt(kTwoPi));
}

double norm_cdf(double x, double mu, double s) {
  if (!(s > 0.0)) throw std::domain_error("norm_cdf requires s > 0");
  if (std::isnan(x) || std::isnan(mu)) {
    throw std::domain_error("norm_cdf received NaN");
  }
  if (x == kInf) return 1.0;
  if (x == -kInf) return 0.0;
  return phid((x - mu) / s);
}

double bvn_cdf(double x1, double x2, const BivariateGaussian& g) {
  g.validate();
  const double s1 = std::sqrt(g.sigma[0][0]);
  const double s2 = std::sqrt(g.sigma[1][1]);
  if (!(s1 > 0.0) || !(s2 > 0.0)) {
    throw std::domain_error("bvn_cdf requires positive variances");
  }
  if (std::isnan(x1) || std::isnan(x2)) {
    throw std::domain_error("bvn_cdf received NaN");
  }
  return bvn_lower_std(standardize(x1, g.mu[0], s1),
                       standardize(x2, g.mu[1], s2), g.rho());
}

double gamma_rect(double a, double b, double c, double d,
                  const BivariateGaussian& g) {
  if (std::isnan(a) || std::isnan(b) || std::isnan(c) || std::isnan(d)) {
    throw std::domain_error("gamma_rect received NaN bounds");
  }
  if (a > b || c > d) {
    throw std::domain_error("gamma_rect requires a <= b and c <= d");
  }
  if (a == b || c == d) return 0.0;
  const double v = bvn_cdf(b, d, g) + bvn_cdf(a, c, g) - bvn_cdf(a, d, g) -
                   bvn_cdf(b, c, g);
  if (v < 0.0) {
    if (v < -1e-12) {
      throw NumericalError("gamma_rect produced a negative mass beyond tolerance");
    }
    return 0.0;
  }
  if (v > 1.0) {
    if (v > 1.0 + 1e-12) {
      throw NumericalError("gamma_rect produced mass > 1 beyond tolerance");
    }
    return 1.0;
  }
  return v;
}

}  // namespace qpoi
