#pragma once

#include <array>

namespace qpoi {

// Mean pair and 2x2 covariance of a bivariate normal. Arguments of the
// bivariate CDF may be +/-infinity; the covariance must be symmetric and
// positive semi-definite up to a small tolerance.
struct BivariateGaussian {
  std::array<double, 2> mu{0.0, 0.0};
  std::array<std::array<double, 2>, 2> sigma{{{1.0, 0.0}, {0.0, 1.0}}};

  // Throws std::domain_error if sigma is asymmetric, has a negative variance,
  // or has determinant below -1e-12.
  void validate() const;

  // Correlation coefficient clamped to [-1, 1]; requires positive variances.
  double rho() const;

  static BivariateGaussian standard(double rho);
  static BivariateGaussian from_moments(double mu1, double mu2, double s1,
                                        double s2, double rho);
};

// Univariate normal density with mean mu and standard deviation s > 0.
double norm_pdf(double x, double mu, double s);

// Univariate normal CDF; x may be +/-infinity. Throws std::domain_error on
// s <= 0 or NaN input.
double norm_cdf(double x, double mu, double s);

// P(X1 <= x1, X2 <= x2) for (X1, X2) ~ N(g.mu, g.sigma). Arguments may be
// +/-infinity (an infinite argument reduces the integral to a univariate
// CDF). Absolute error <= 1e-10 for |rho| <= 0.999; correlations within
// 1e-9 of +/-1 dispatch to the degenerate closed form.
double bvn_cdf(double x1, double x2, const BivariateGaussian& g);

// Probability mass of the rectangle (a, b] x (c, d] under g, computed as
// bvn_cdf(b,d) + bvn_cdf(a,c) - bvn_cdf(a,d) - bvn_cdf(b,c). Tiny negative
// values from cancellation (within 1e-12) are clamped to 0. Throws
// std::domain_error if a > b or c > d.
double gamma_rect(double a, double b, double c, double d,
                  const BivariateGaussian& g);

}  // namespace qpoi
