#include "qpoi/prob_kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

namespace qpoi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BvnCase {
  double h, k, rho, value;
};

const BvnCase kBvnCases[] = {
#include "data/bvn_reference_cases.inc"
};

// Composite Simpson quadrature of the standard bivariate normal density
// over [a, b] x [c, d]; independent of the Gauss-Legendre series under test.
double simpson_rectangle(double a, double b, double c, double d, double rho,
                         int panels) {
  const double det = 1.0 - rho * rho;
  const auto density = [&](double x, double y) {
    return std::exp(-0.5 * (x * x - 2.0 * rho * x * y + y * y) / det) /
           (2.0 * std::numbers::pi * std::sqrt(det));
  };
  const int n = 2 * panels;
  const double hx = (b - a) / n;
  const double hy = (d - c) / n;
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wx = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    for (int j = 0; j <= n; ++j) {
      const double wy = (j == 0 || j == n) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      total += wx * wy * density(a + i * hx, c + j * hy);
    }
  }
  return total * hx * hy / 9.0;
}

TEST(NormCdf, MatchesQuadratureReferences) {
  // Reference values from adaptive quadrature of the normal density.
  EXPECT_NEAR(norm_pdf(3.0, 0.0, 1.0), 0.0044318484119380075, 1e-15);
  EXPECT_NEAR(norm_cdf(1.96, 0.0, 1.0), 0.9750021048517795, 1e-14);
  EXPECT_NEAR(norm_cdf(0.0, 0.0, 1.0), 0.5, 1e-16);
}

TEST(NormCdf, HandlesAffineTransformAndInfinities) {
  EXPECT_DOUBLE_EQ(norm_cdf(kInf, 3.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(norm_cdf(-kInf, 3.0, 2.0), 0.0);
  EXPECT_NEAR(norm_cdf(7.0, 3.0, 2.0), norm_cdf(2.0, 0.0, 1.0), 1e-15);
  for (double x : {-3.7, -0.4, 0.9, 2.5}) {
    EXPECT_NEAR(norm_cdf(x, 0.0, 1.0) + norm_cdf(-x, 0.0, 1.0), 1.0, 1e-15);
  }
}

TEST(NormCdf, RejectsBadInputs) {
  EXPECT_THROW(norm_cdf(0.0, 0.0, 0.0), std::domain_error);
  EXPECT_THROW(norm_cdf(0.0, 0.0, -1.0), std::domain_error);
  EXPECT_THROW(norm_cdf(std::nan(""), 0.0, 1.0), std::domain_error);
  EXPECT_THROW(norm_pdf(0.0, 0.0, 0.0), std::domain_error);
}

TEST(BivariateGaussian, ValidatesCovariance) {
  BivariateGaussian g = BivariateGaussian::standard(0.3);
  EXPECT_NO_THROW(g.validate());
  EXPECT_NEAR(g.rho(), 0.3, 1e-15);

  BivariateGaussian asym = g;
  asym.sigma[0][1] = 0.4;
  EXPECT_THROW(asym.validate(), std::domain_error);

  BivariateGaussian negvar = g;
  negvar.sigma[0][0] = -1.0;
  EXPECT_THROW(negvar.validate(), std::domain_error);

  BivariateGaussian indef = g;
  indef.sigma[0][1] = indef.sigma[1][0] = 2.0;  // det = -3
  EXPECT_THROW(indef.validate(), std::domain_error);
}

TEST(BivariateGaussian, FromMomentsRoundTrips) {
  const BivariateGaussian g =
      BivariateGaussian::from_moments(1.5, -2.0, 0.6, 3.0, -0.45);
  EXPECT_DOUBLE_EQ(g.mu[0], 1.5);
  EXPECT_DOUBLE_EQ(g.mu[1], -2.0);
  EXPECT_NEAR(g.sigma[0][0], 0.36, 1e-15);
  EXPECT_NEAR(g.sigma[1][1], 9.0, 1e-15);
  EXPECT_NEAR(g.rho(), -0.45, 1e-15);
}

TEST(BvnCdf, MatchesAsinClosedFormAtOrigin) {
  // P(X <= 0, Y <= 0) = 1/4 + asin(rho) / (2 pi).
  for (double rho = -0.9; rho <= 0.9001; rho += 0.1) {
    const double expected = 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
    EXPECT_NEAR(bvn_cdf(0.0, 0.0, BivariateGaussian::standard(rho)), expected,
                1e-14)
        << "rho=" << rho;
  }
  EXPECT_NEAR(bvn_cdf(0.0, 0.0, BivariateGaussian::standard(0.5)),
              0.33333333333333337, 1e-15);
}

TEST(BvnCdf, MatchesIndependentQuadratureTable) {
  for (const BvnCase& c : kBvnCases) {
    EXPECT_NEAR(bvn_cdf(c.h, c.k, BivariateGaussian::standard(c.rho)), c.value,
                5e-10)
        << "h=" << c.h << " k=" << c.k << " rho=" << c.rho;
  }
}

TEST(BvnCdf, ReducesToUnivariateAtInfinity) {
  const BivariateGaussian g = BivariateGaussian::standard(0.7);
  EXPECT_NEAR(bvn_cdf(kInf, 0.3, g), norm_cdf(0.3, 0.0, 1.0), 1e-15);
  EXPECT_NEAR(bvn_cdf(-1.1, kInf, g), norm_cdf(-1.1, 0.0, 1.0), 1e-15);
  EXPECT_DOUBLE_EQ(bvn_cdf(-kInf, 0.3, g), 0.0);
  EXPECT_DOUBLE_EQ(bvn_cdf(kInf, kInf, g), 1.0);
}

TEST(BvnCdf, DegenerateCorrelationsUseClosedForms) {
  const BivariateGaussian plus = BivariateGaussian::standard(1.0);
  const BivariateGaussian minus = BivariateGaussian::standard(-1.0);
  EXPECT_NEAR(bvn_cdf(0.4, 1.2, plus), norm_cdf(0.4, 0.0, 1.0), 1e-15);
  EXPECT_NEAR(bvn_cdf(0.4, 1.2, minus),
              std::max(0.0, norm_cdf(0.4, 0.0, 1.0) +
                              norm_cdf(1.2, 0.0, 1.0) - 1.0),
              1e-15);
  EXPECT_DOUBLE_EQ(bvn_cdf(1.0, -2.0, minus), 0.0);
}

TEST(BvnCdf, SymmetricUnderArgumentSwap) {
  std::mt19937_64 rng(7u);
  std::uniform_real_distribution<double> arg(-3.0, 3.0);
  std::uniform_real_distribution<double> corr(-0.99, 0.99);
  for (int t = 0; t < 200; ++t) {
    const double h = arg(rng), k = arg(rng), rho = corr(rng);
    const BivariateGaussian g = BivariateGaussian::standard(rho);
    EXPECT_NEAR(bvn_cdf(h, k, g), bvn_cdf(k, h, g), 1e-14);
  }
}

TEST(BvnCdf, StandardizesGeneralMoments) {
  const BivariateGaussian g =
      BivariateGaussian::from_moments(2.0, -1.0, 0.5, 4.0, 0.6);
  const BivariateGaussian std_g = BivariateGaussian::standard(0.6);
  EXPECT_NEAR(bvn_cdf(2.25, 3.0, g), bvn_cdf(0.5, 1.0, std_g), 1e-14);
}

TEST(GammaRect, MatchesSimpsonQuadrature) {
  const struct {
    double a, b, c, d, rho;
  } rects[] = {
      {-1.0, 0.5, -0.5, 2.0, 0.5},   {-2.0, 2.0, -2.0, 2.0, -0.8},
      {0.0, 0.25, -3.0, -0.5, 0.3},  {-0.75, 3.0, 0.5, 1.0, -0.35},
      {-2.5, -1.0, -1.5, 2.5, 0.9},  {0.2, 0.7, 0.1, 0.6, -0.05},
  };
  for (const auto& r : rects) {
    const double expected = simpson_rectangle(r.a, r.b, r.c, r.d, r.rho, 220);
    const double got =
        gamma_rect(r.a, r.b, r.c, r.d, BivariateGaussian::standard(r.rho));
    EXPECT_NEAR(got, expected, 1e-8)
        << "rect [" << r.a << "," << r.b << "]x[" << r.c << "," << r.d
        << "] rho=" << r.rho;
  }
}

TEST(GammaRect, IsAdditiveAcrossSplits) {
  const BivariateGaussian g = BivariateGaussian::standard(0.42);
  const double whole = gamma_rect(-1.5, 2.0, -0.75, 1.25, g);
  const double left = gamma_rect(-1.5, 0.3, -0.75, 1.25, g);
  const double right = gamma_rect(0.3, 2.0, -0.75, 1.25, g);
  EXPECT_NEAR(left + right, whole, 1e-12);
}

TEST(GammaRect, HandlesDegenerateAndUnboundedBoxes) {
  const BivariateGaussian g = BivariateGaussian::standard(-0.3);
  EXPECT_DOUBLE_EQ(gamma_rect(0.5, 0.5, -1.0, 1.0, g), 0.0);
  EXPECT_DOUBLE_EQ(gamma_rect(-1.0, 1.0, 0.25, 0.25, g), 0.0);
  EXPECT_NEAR(gamma_rect(-kInf, kInf, -kInf, kInf, g), 1.0, 1e-15);
  EXPECT_NEAR(gamma_rect(-kInf, 0.0, -kInf, kInf, g), 0.5, 1e-15);
  EXPECT_THROW(gamma_rect(1.0, 0.0, -1.0, 1.0, g), std::domain_error);
  EXPECT_THROW(gamma_rect(-1.0, 1.0, 1.0, 0.0, g), std::domain_error);
}

TEST(GammaRect, NonNegativeOnThinSlivers) {
  const BivariateGaussian g = BivariateGaussian::standard(0.97);
  std::mt19937_64 rng(11u);
  std::uniform_real_distribution<double> arg(-4.0, 4.0);
  for (int t = 0; t < 500; ++t) {
    const double a = arg(rng);
    const double c = arg(rng);
    const double mass = gamma_rect(a, a + 1e-9, c, c + 1e-9, g);
    EXPECT_GE(mass, 0.0);
    EXPECT_LE(mass, 1e-9);
  }
}

}  // namespace
}  // namespace qpoi
