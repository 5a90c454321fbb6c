#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "affsob/affine_energy.hpp"
#include "affsob/errors.hpp"
#include "affsob/family.hpp"
#include "affsob/sl_opt.hpp"
#include "oracles/frozen_oracles.hpp"

using namespace affsob;

namespace {

constexpr double kPi = std::numbers::pi;

const QuadratureBundle& quads2() {
  static const QuadratureBundle q(2);
  return q;
}

AnalyticField aniso() {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = 4.0;
  A(1, 1) = 1.0;
  return AnalyticField::gaussian(A);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(AffineEnergy, AnisotropicGaussianOracle) {
  const EnergyResult e = affine_energy(aniso(), SmoothnessParams::make(1, 2), quads2());
  EXPECT_LT(rel(e.value, oracle::kAnisoEnergyS1P2), 1e-6);
  EXPECT_FALSE(e.degenerate);
  EXPECT_FALSE(e.infinite);
}

TEST(AffineEnergy, RadialEqualityForGaussian) {
  const AnalyticField g = AnalyticField::standard_gaussian(2);
  for (auto [s, p] : {std::pair{0.5, 2.0}, {1.0, 2.0}, {1.0, 1.0}}) {
    const auto P = SmoothnessParams::make(s, p);
    const double E = affine_energy(g, P, quads2()).value;
    const double ref = P.fractional ? seminorm(g, P, quads2()) : starred_seminorm(g, static_cast<int>(s), p, quads2());
    EXPECT_LT(rel(E, ref), 1e-7) << s << "," << p;
    EXPECT_NEAR(jensen_gap(g, P, quads2()), 0.0, 1e-7 * ref);
  }
}

TEST(AffineEnergy, JensenGapStrictForAnisotropic) {
  const double gap = jensen_gap(aniso(), SmoothnessParams::make(1, 2), quads2());
  EXPECT_NEAR(gap, oracle::kAnisoStarredS1P2 - oracle::kAnisoEnergyS1P2, 1e-6);
  EXPECT_GT(gap, 0.3);
}

TEST(AffineEnergy, HomogeneousOfDegreeOne) {
  const auto P = SmoothnessParams::make(0.5, 2);
  const double a = affine_energy(aniso(), P, quads2()).value;
  const double b = affine_energy(aniso().scaled(2.5), P, quads2()).value;
  EXPECT_LT(rel(b, 2.5 * a), 1e-12);
}

TEST(AffineEnergy, ZeroFieldReportedDegenerate) {
  const EnergyResult e = affine_energy(AnalyticField(2), SmoothnessParams::make(1, 2), quads2());
  EXPECT_TRUE(e.degenerate);
}

TEST(AffineEnergy, MonitorReportsSmallDifference) {
  const EnergyResult e = affine_energy_monitored(aniso(), SmoothnessParams::make(1, 2), quads2());
  EXPECT_LT(e.monitor_rel_diff, 1e-9);
  EXPECT_LT(rel(e.value, oracle::kAnisoEnergyS1P2), 1e-6);
}

class InvarianceProperty : public ::testing::TestWithParam<int> {};

TEST_P(InvarianceProperty, EnergyUnchangedUnderUnimodularMaps) {
  const Eigen::MatrixXd T = random_unimodular(2, 10.0, 2024 + GetParam());
  ASSERT_NEAR(T.determinant(), 1.0, 1e-12);
  const AnalyticField f = standard_family().member("two_bump").field;
  for (auto [s, p] : {std::pair{1.0, 2.0}, {2.0, 2.0}}) {
    const auto P = SmoothnessParams::make(s, p);
    const double a = affine_energy(f, P, quads2()).value;
    const double b = affine_energy(affine_compose(f, T), P, quads2()).value;
    EXPECT_LT(rel(b, a), 5e-3) << "s=" << s;
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, InvarianceProperty, ::testing::Range(0, 4));

TEST(AffineEnergy, ClassicalSeminormIsNotInvariant) {
  Eigen::MatrixXd T(2, 2);
  T << 1.0, 3.0, 0.0, 1.0;
  const auto P = SmoothnessParams::make(1, 2);
  const double a = seminorm(aniso(), P, quads2());
  const double b = seminorm(affine_compose(aniso(), T), P, quads2());
  EXPECT_GT(rel(b, a), 0.05);
}

TEST(PsiEnergy, PowerLawReproducesAffineEnergy) {
  const auto P = SmoothnessParams::make(1, 2);
  const PsiSpec psi = PsiSpec::power_law(1, 2, 2);
  EXPECT_TRUE(psi.check());
  const double Ep = psi_energy(aniso(), P, psi, quads2()).value;
  const double E = affine_energy(aniso(), P, quads2()).value;
  EXPECT_LT(rel(Ep, E), 1e-9);
}

TEST(PsiEnergy, IdentityGivesMeanEnergy) {
  const auto P = SmoothnessParams::make(1, 2);
  const DirectionalEnergyProfile prof = directional_profile(aniso(), P, quads2());
  const double v = psi_energy(prof, PsiSpec::identity()).value;
  // (σ·(1/σ)∫D)^{1/p}, ∫D = 2π·(π + π/4)/2
  EXPECT_LT(rel(v, std::sqrt(kPi * (oracle::kAnisoDirE1 + oracle::kAnisoDirE2))), 1e-6);
}

TEST(PsiEnergy, InconsistentInverseRejected) {
  PsiSpec bad;
  bad.psi = [](double x) { return x; };
  bad.psi_inv = [](double x) { return 2 * x; };
  EXPECT_FALSE(bad.check());
}
