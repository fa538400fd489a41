#include "qpoi/problems.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "qpoi/errors.hpp"
#include "qpoi/pareto.hpp"

namespace qpoi {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd x(static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) x[i++] = v;
  return x;
}

TEST(Zdt, MatchesClosedFormAnchors) {
  const auto z10 = zdt(1, Eigen::VectorXd::Zero(5));
  EXPECT_DOUBLE_EQ(z10[0], 0.0);
  EXPECT_DOUBLE_EQ(z10[1], 1.0);

  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(4);
  e1[0] = 1.0;
  const auto z11 = zdt(1, e1);
  EXPECT_DOUBLE_EQ(z11[0], 1.0);
  EXPECT_NEAR(z11[1], 0.0, 1e-15);

  const auto z20 = zdt(2, Eigen::VectorXd::Zero(3));
  EXPECT_DOUBLE_EQ(z20[0], 0.0);
  EXPECT_DOUBLE_EQ(z20[1], 1.0);
}

TEST(Zdt, MatchesReferenceEvaluations) {
  // Reference values computed independently from the published formulas.
  const Eigen::VectorXd x = vec({0.5, 0.2, 0.8, 0.1, 0.4});
  const auto f1 = zdt(1, x);
  EXPECT_DOUBLE_EQ(f1[0], 0.5);
  EXPECT_NEAR(f1[1], 2.895980054225096, 1e-14);

  const auto f2 = zdt(2, x);
  EXPECT_DOUBLE_EQ(f2[0], 0.5);
  EXPECT_NEAR(f2[1], 4.317857142857143, 1e-14);

  const auto f3 = zdt(3, vec({0.4, 0.2, 0.6}));
  EXPECT_DOUBLE_EQ(f3[0], 0.4);
  EXPECT_NEAR(f3[1], 3.243534003374946, 1e-14);
}

TEST(Zdt, RejectsBadInputs) {
  EXPECT_THROW(zdt(4, Eigen::VectorXd::Zero(3)), ConfigError);
  EXPECT_THROW(zdt(1, Eigen::VectorXd::Zero(1)), std::domain_error);
  EXPECT_THROW(zdt(1, vec({0.5, 1.2})), std::domain_error);
  EXPECT_THROW(zdt(1, vec({-0.1, 0.5})), std::domain_error);
}

TEST(SyntheticFront, MidArcSinglePoint) {
  const ParetoArchive one = synthetic_front(FrontKind::kConcave, 1, 1.0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one.points()[0][0], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(one.points()[0][1], std::sqrt(0.5), 1e-15);
}

TEST(SyntheticFront, AllPointsSurviveInsertion) {
  for (const FrontKind kind : {FrontKind::kConvex, FrontKind::kConcave}) {
    const ParetoArchive front = synthetic_front(kind, 100, 10.0);
    EXPECT_EQ(front.size(), 100u) << to_string(kind);
    const auto& pts = front.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_GE(pts[i][0], 0.0);
      EXPECT_LE(pts[i][0], 10.0);
      if (i > 0) {
        EXPECT_LT(pts[i - 1][0], pts[i][0]);  // strictly sorted in f1
        EXPECT_GT(pts[i - 1][1], pts[i][1]);  // strictly decreasing f2
        EXPECT_FALSE(dominates(pts[i - 1], pts[i]));
        EXPECT_FALSE(dominates(pts[i], pts[i - 1]));
      }
    }
  }
}

TEST(SyntheticFront, KindParsingAndValidation) {
  EXPECT_EQ(front_kind_from_string("convex"), FrontKind::kConvex);
  EXPECT_EQ(front_kind_from_string("concave"), FrontKind::kConcave);
  EXPECT_THROW(front_kind_from_string("spherical"), ConfigError);
  EXPECT_THROW(synthetic_front(FrontKind::kConvex, 0, 1.0), ConfigError);
  EXPECT_THROW(synthetic_front(FrontKind::kConvex, 5, 0.0), ConfigError);

  const SyntheticFront gen{FrontKind::kConvex, 7, 2.5};
  EXPECT_EQ(gen.generate().size(), 7u);
}

TEST(MakeProblem, BuildsEveryRegisteredProblem) {
  for (const std::string& name : problem_names()) {
    const int dim = name.rfind("zdt", 0) == 0 ? 4 : 2;
    const Problem p = make_problem(name, dim);
    EXPECT_EQ(p.name, name);
    EXPECT_EQ(p.d, dim);
    EXPECT_EQ(p.m, 2);
    EXPECT_EQ(p.box.dim(), dim);
    const Eigen::VectorXd mid = 0.5 * (p.box.lower + p.box.upper);
    const auto f = p.evaluate(mid);
    EXPECT_TRUE(std::isfinite(f[0]) && std::isfinite(f[1])) << name;
  }
}

TEST(MakeProblem, ToyProblemValues) {
  const Problem linear = make_problem("linear", 3);
  const auto fl = linear.evaluate(vec({0.3, 0.9, 0.1}));
  EXPECT_DOUBLE_EQ(fl[0], 0.3);
  EXPECT_DOUBLE_EQ(fl[1], 0.7);

  const Problem schaffer = make_problem("schaffer", 1);
  const auto fs = schaffer.evaluate(vec({2.0}));
  EXPECT_DOUBLE_EQ(fs[0], 4.0);
  EXPECT_DOUBLE_EQ(fs[1], 0.0);
  EXPECT_DOUBLE_EQ(schaffer.box.lower[0], -5.0);
  EXPECT_DOUBLE_EQ(schaffer.box.upper[0], 5.0);
}

TEST(MakeProblem, RejectsUnknownNamesListingOptions) {
  try {
    make_problem("dtlz2", 5);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("zdt1"), std::string::npos);
    EXPECT_NE(msg.find("schaffer"), std::string::npos);
  }
  EXPECT_THROW(make_problem("zdt1", 1), ConfigError);
  EXPECT_THROW(make_problem("linear", 0), ConfigError);
}

TEST(DefaultHvReference, PerProblemValues) {
  EXPECT_EQ(default_hv_reference("zdt1"), (std::array<double, 2>{11.0, 11.0}));
  EXPECT_EQ(default_hv_reference("zdt3"), (std::array<double, 2>{11.0, 11.0}));
  EXPECT_EQ(default_hv_reference("linear"), (std::array<double, 2>{2.0, 2.0}));
  EXPECT_EQ(default_hv_reference("schaffer"),
            (std::array<double, 2>{30.0, 30.0}));
}

}  // namespace
}  // namespace qpoi
