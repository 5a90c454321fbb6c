#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "affsob/constants.hpp"
#include "affsob/errors.hpp"
#include "affsob/family.hpp"
#include "affsob/sl_opt.hpp"
#include "oracles/frozen_oracles.hpp"

using namespace affsob;

namespace {

// 10⁵-point log grid on (lo, lo·span], refined by a local 10⁵-point grid around the best node.
double scan_sup(const std::function<double(double)>& g, double lo, double span = 1e7) {
  const int n = 100000;
  const double a = std::log(lo), b = std::log(lo * span);
  double best = -INFINITY, arg = a;
  for (int k = 1; k <= n; ++k) {
    const double u = a + (b - a) * k / n;
    const double v = g(std::exp(u));
    if (v > best) best = v, arg = u;
  }
  const double h = (b - a) / n;
  for (int k = -n / 2; k <= n / 2; ++k) {
    const double u = arg + 2.0 * h * k / n;
    if (u <= a) continue;
    best = std::max(best, g(std::exp(u)));
  }
  return best;
}

}  // namespace

TEST(Constants, FirstApproachN2) {
  const SupResult r = c1_first_approach(2);
  EXPECT_NEAR(r.value, oracle::kC1FirstN2Closed, 1e-10);
  EXPECT_NEAR(r.argmax, oracle::kC1FirstN2ArgClosed, 1e-5);
  EXPECT_NEAR(r.value, oracle::kC1FirstN2Scan, 1e-8);
}

TEST(Constants, FirstApproachBoundedByInverseDimension) {
  for (int N = 2; N <= 6; ++N) {
    const double v = c1_first_approach(N).value;
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0 / N);
  }
}

TEST(Constants, SecondApproachBranches) {
  EXPECT_EQ(c1_second_approach(2, 2), 0.7071067811865476);
  EXPECT_EQ(c1_second_approach(3, 4), 0.5);
  EXPECT_DOUBLE_EQ(c1_second_approach(1, 3), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(c1_second_approach(1.5, 4), std::pow(4.0, -1.0 / 1.5));
  EXPECT_THROW(c1_second_approach(0.5, 2), DomainError);
}

TEST(Constants, RatioOfApproachesDecreasesWithDimension) {
  double prev = INFINITY;
  for (int N = 2; N <= 6; ++N) {
    const double ratio = c1_first_approach(N).value / c1_second_approach(2, N);
    EXPECT_LE(ratio, 1.0);
    EXPECT_LT(ratio, prev);
    prev = ratio;
  }
}

TEST(Constants, GeneralReducesToFirstWithSlicingConstants) {
  const GeneralConstant g = c1_general(1, 2, 2, 0.5, 1.0);
  EXPECT_NEAR(g.value, oracle::kC1FirstN2Closed, 1e-10);
  EXPECT_EQ(g.c2, 1.0);
  // K1 = K2 = 1: sup of 1/(λ+1) approached at λ → 1⁺
  EXPECT_NEAR(c1_general(1, 2, 2, 1.0, 1.0).value, 0.5, 1e-8);
}

TEST(Constants, GeneralMonotoneInK1) {
  const double a = c1_general(0.5, 2, 2, 0.3, 1.0).value;
  const double b = c1_general(0.5, 2, 2, 0.5, 1.0).value;
  const double c = c1_general(0.5, 2, 2, 0.7, 1.0).value;
  EXPECT_GT(a, 0.0);
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  EXPECT_THROW(c1_general(1, 2, 2, 1.5, 1.0), DomainError);
}

TEST(Constants, CGamma) {
  const SupResult r = c_gamma(1, 2);
  EXPECT_NEAR(r.value, oracle::kCGammaClosed, 1e-10);
  EXPECT_NEAR(r.argmax, oracle::kCGammaArgClosed, 1e-5);
  for (double g : {1.0, 2.0, 4.0}) EXPECT_GT(c_gamma(g, 2).value, 0.0);
  EXPECT_LE(c_gamma(1e3, 2).value, 1e-3);
  EXPECT_THROW(c_gamma(0.5, 2), DomainError);
}

class SupVersusScan : public ::testing::TestWithParam<int> {};

TEST_P(SupVersusScan, GoldenSectionMatchesGrid) {
  const int N = GetParam();
  const double e = 1.0 / (N - 1);
  const double first = scan_sup(
      [&](double l) { return (1.0 / N - std::pow(l, -e)) / (l - std::pow(l, -e)); }, std::pow(double(N), N - 1));
  EXPECT_NEAR(c1_first_approach(N).value, first, 1e-8 * first);

  const double s = 0.5, K1 = 0.4, K2 = 1.2;
  const double es = s / (N - 1);
  const double general = scan_sup(
      [&](double l) { return (K1 - K2 * std::pow(l, -es)) / (K2 * K2 * (std::pow(l, s) - std::pow(l, -es))); },
      std::pow(K2 / K1, (N - 1) / s));
  EXPECT_NEAR(c1_general(s, 2, N, K1, K2).value, general, 1e-8 * general);

  const double gamma = 1.5, eg = 2.0 / (N - 1);
  const double cg = scan_sup(
      [&](double l) { return (1 - gamma * std::pow(l, -eg)) / (gamma * (l * l + std::pow(l, -eg))); },
      std::pow(gamma, (N - 1) / 2.0));
  EXPECT_NEAR(c_gamma(gamma, N).value, cg, 1e-8 * cg);
}

INSTANTIATE_TEST_SUITE_P(Dimensions, SupVersusScan, ::testing::Values(2, 3, 4, 6));

TEST(Constants, MaximizeLogFindsInteriorPeak) {
  const SupResult r = maximize_log([](double l) { return std::log(l) / l; }, 1.0);
  // a smooth peak pins the argmax only to ~sqrt(eps)
  EXPECT_NEAR(r.argmax, std::exp(1.0), 1e-7);
  EXPECT_NEAR(r.value, 1.0 / std::exp(1.0), 1e-14);
}

TEST(SlicingConstants, EstimatesWithinObviousBounds) {
  const QuadratureBundle q(2);
  std::vector<AnalyticField> fam;
  for (const char* n : {"radial", "aniso", "shear2"}) fam.push_back(standard_family().member(n).field);
  std::vector<Eigen::MatrixXd> frames{Eigen::MatrixXd::Identity(2, 2), random_unimodular(2, 1.0, 3)};
  const SlicingEstimate est = estimate_slicing_constants(fam, SmoothnessParams::make(1, 2), frames, q);
  EXPECT_EQ(est.samples, 6);
  EXPECT_GE(est.K1, 0.5 - 1e-9);
  EXPECT_LE(est.K1, est.K2);
  EXPECT_LE(est.K2, 1.0 + 1e-9);

  const SlicingEstimate single =
      estimate_slicing_constants({fam[0]}, SmoothnessParams::make(1, 2), {frames[0]}, q);
  EXPECT_EQ(single.K1, single.K2);
}
