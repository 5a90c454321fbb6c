#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "affsob/errors.hpp"
#include "affsob/fields.hpp"
#include "affsob/sl_opt.hpp"

using namespace affsob;

namespace {

Eigen::MatrixXd diag2(double a, double b) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = a;
  A(1, 1) = b;
  return A;
}

AnalyticField poly_gaussian() {
  Polynomial q = Polynomial::monomial({2, 0, 0}, 1.0) + Polynomial::constant(-1.0);
  Eigen::VectorXd mu(2);
  mu << 0.3, -0.2;
  Eigen::MatrixXd A(2, 2);
  A << 1.5, 0.4, 0.4, 0.8;
  return AnalyticField::gaussian(A, mu, 0.7, q);
}

double fd_derivative(const AnalyticField& f, const Eigen::VectorXd& x, const Eigen::VectorXd& v, double h) {
  return (f.evaluate(x + h * v) - f.evaluate(x - h * v)) / (2 * h);
}

}  // namespace

TEST(Polynomial, ArithmeticAndDerivative) {
  const Polynomial x = Polynomial::monomial({1, 0, 0}, 1.0);
  const Polynomial y = Polynomial::monomial({0, 1, 0}, 1.0);
  const Polynomial p = (x + y) * (x - y);  // x² - y²
  const double pt[2] = {1.5, -0.5};
  EXPECT_DOUBLE_EQ(p.evaluate(pt, 2), 2.0);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.derivative(0), x * 2.0);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_TRUE(Polynomial::constant(1.0).is_constant_one());
}

TEST(Polynomial, ComposeLinearMatchesEvaluation) {
  const Polynomial p = Polynomial::monomial({2, 1, 0}, 2.0) + Polynomial::monomial({0, 3, 0}, -1.0);
  Eigen::MatrixXd T(2, 2);
  T << 1.2, -0.4, 0.3, 0.9;
  const Polynomial c = p.compose_linear(T);
  const Eigen::Vector2d x(0.7, -1.3);
  const Eigen::Vector2d Tx = T * x;
  EXPECT_NEAR(c.evaluate(x.data(), 2), p.evaluate(Tx.data(), 2), 1e-12);
}

TEST(AnalyticField, StandardGaussianValues) {
  const AnalyticField f = AnalyticField::standard_gaussian(2);
  EXPECT_DOUBLE_EQ(f.evaluate(Eigen::Vector2d(0, 0)), 1.0);
  EXPECT_NEAR(f.evaluate(Eigen::Vector2d(1, 1)), std::exp(-1.0), 1e-15);
}

TEST(AnalyticField, RejectsIndefinitePrecision) {
  EXPECT_THROW(AnalyticField::gaussian(diag2(1.0, -1.0)), DomainError);
  Eigen::MatrixXd A(2, 2);
  // only the symmetric part enters x·Ax
  A << 1, 3, -1, 1;
  EXPECT_THROW(AnalyticField::gaussian(A), DomainError);
  A << 1, 0.5, 0, 1;
  EXPECT_NO_THROW(AnalyticField::gaussian(A));
}

TEST(AnalyticField, ZeroCoefficientTermsDropped) {
  const AnalyticField f = AnalyticField::gaussian(diag2(1, 1), {}, 0.0);
  EXPECT_TRUE(f.is_zero());
}

TEST(AnalyticField, PartialsMatchCentralDifferences) {
  const AnalyticField f = poly_gaussian();
  const Eigen::Vector2d x(0.4, 0.9);
  for (int i = 0; i < 2; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(2);
    e[i] = 1.0;
    EXPECT_NEAR(f.partial(i).evaluate(x), fd_derivative(f, x, e, 1e-5), 1e-8);
  }
}

TEST(AnalyticField, SecondDirectionalDerivativeMatchesDifferences) {
  const AnalyticField f = poly_gaussian();
  Eigen::VectorXd xi(2);
  xi << std::cos(0.7), std::sin(0.7);
  const AnalyticField d2 = directional_derivative(f, xi, 2);
  const Eigen::Vector2d x(-0.2, 0.5);
  const double h = 1e-4;
  const double fd = (f.evaluate(x + h * xi) - 2 * f.evaluate(x) + f.evaluate(x - h * xi)) / (h * h);
  EXPECT_NEAR(d2.evaluate(x), fd, 1e-6);
}

TEST(AnalyticField, DirectionalDerivativeRequiresUnitVector) {
  EXPECT_THROW(directional_derivative(poly_gaussian(), Eigen::Vector2d(1.0, 1.0), 1), DomainError);
}

TEST(AnalyticField, AffineComposeEvaluatesAtTx) {
  const AnalyticField f = poly_gaussian();
  const Eigen::MatrixXd T = random_unimodular(2, 5.0, 11);
  const AnalyticField g = affine_compose(f, T);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 20; ++k) {
    const Eigen::Vector2d x(nd(rng), nd(rng));
    EXPECT_NEAR(g.evaluate(x), f.evaluate(T * x), 1e-13);
  }
}

TEST(AnalyticField, LineRestrictionMatchesEvaluation) {
  const AnalyticField f = poly_gaussian() + AnalyticField::standard_gaussian(2).scaled(0.5);
  const double x0[2] = {0.3, -0.1};
  const double dir[2] = {0.6, 0.8};
  AnalyticField::Line line;
  f.restrict_to_line(x0, dir, line);
  for (double u : {-2.0, -0.3, 0.0, 1.1}) {
    const Eigen::Vector2d x(x0[0] + u * dir[0], x0[1] + u * dir[1]);
    EXPECT_NEAR(line(u), f.evaluate(x), 1e-14);
  }
}

TEST(AnalyticField, DecayBoundHolds) {
  const AnalyticField f = poly_gaussian();
  const DecayBound b = f.decay_bound();
  for (double r : {0.0, 1.0, 3.0, 6.0}) {
    for (double th : {0.0, 1.0, 2.5}) {
      const Eigen::Vector2d x(r * std::cos(th), r * std::sin(th));
      EXPECT_LE(std::abs(f.evaluate(x)), b.C * std::exp(-b.c * r * r) * (1 + 1e-12));
    }
  }
}

TEST(FiniteDifference, BinomialWeights) {
  const AnalyticField f = AnalyticField::standard_gaussian(2);
  const Eigen::Vector2d h(0.3, -0.2);
  const Eigen::Vector2d x(0.1, 0.4);
  const auto d2 = finite_difference(f, h, 2);
  EXPECT_NEAR(d2(x), f.evaluate(x + 2 * h) - 2 * f.evaluate(x + h) + f.evaluate(x), 1e-15);
  EXPECT_DOUBLE_EQ(binomial(5, 2), 10.0);
}

TEST(Multilinear, QuadraticFormNormIsSpectralRadius) {
  // f = exp(-xᵀAx/2): D²f(0) = -A, so the bilinear norm is λmax(A).
  Eigen::MatrixXd A(2, 2);
  A << 3.0, 1.0, 1.0, 2.0;
  const AnalyticField f = AnalyticField::gaussian(A);
  const SphereQuadrature sphere = build_sphere_quadrature(2, 64);
  const double expected = (5.0 + std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR(multilinear_norm(f, 2, Eigen::Vector2d::Zero(), sphere), expected, 1e-10);
}

TEST(GridField, InterpolatesLinearFunctionsExactly) {
  const GridField g = GridField::sample(
      2, 41, 2.0, [](const double* x) { return 1.0 + 2.0 * x[0] - x[1]; }, 10.0, 0);
  const double pt[2] = {0.37, -0.81};
  EXPECT_NEAR(g(pt), 1.0 + 2.0 * 0.37 + 0.81, 1e-12);
  const double outside[2] = {5.0, 0.0};
  EXPECT_EQ(g(outside), 0.0);
}

TEST(GridField, SaveLoadRoundTrip) {
  const GridField g = GridField::sample(
      2, 9, 1.0, [](const double* x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); }, 1.0);
  const std::string path = ::testing::TempDir() + "grid_roundtrip.txt";
  g.save(path);
  const GridField h = GridField::load(path);
  ASSERT_EQ(h.shape(), g.shape());
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_DOUBLE_EQ(h.values()[k], g.values()[k]);
  EXPECT_DOUBLE_EQ(h.support_radius(), 1.0);
}

TEST(GridField, ComposeWithIdentityIsNoOp) {
  const GridField g = GridField::sample(
      2, 17, 2.0, [](const double* x) { return std::exp(-x[0] * x[0]) * std::cos(x[1]); }, 2.0);
  const GridField h = g.compose(Eigen::MatrixXd::Identity(2, 2));
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(h.values()[k], g.values()[k], 1e-14);
}

TEST(GridField, BoundaryLayerZeroed) {
  const GridField g = GridField::sample(2, 21, 1.0, [](const double*) { return 1.0; }, 1.0, 2);
  EXPECT_EQ(g.boundary_max(2), 0.0);
}
