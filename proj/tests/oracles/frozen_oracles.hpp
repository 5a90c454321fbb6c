// Generated by tests/oracles/compute_oracles.py. Do not edit by hand.
#pragma once

namespace oracle {
inline constexpr double kGaussianL2 = 1.7724538509055160273;
inline constexpr double kGaussianGradL2 = 1.7724538509055160273;
inline constexpr double kGaussianDirS1P2 = 1.5707963267948966192;
inline constexpr double kGaussianDirS2P2 = 2.3561944901923449288;
inline constexpr double kGaussianSemiS2P2 = 2.2005149351777502881;
inline constexpr double kGaussianDirS1P1 = 5.0132565492620010048;
inline constexpr double kGaussianSemiS1P1 = 7.8748049728612098721;
inline constexpr double kGaussianDirHalfP2 = 5.568327996831706983;
inline constexpr double kGaussianDirHalfP1 = 30.568455886545663702;
inline constexpr double kGaussianDirThreeHalfP1 = 20.344425169967358613;
inline constexpr double kGaussianDirHalfP1Closed = 30.568455886544363343;
inline constexpr double kAnisoMinObjectiveSq = 3.1415926596545937777;
inline constexpr double kAnisoMinLambda = 0.7071287501752514526;
inline constexpr double kC1FirstN2Scan = 0.066987298030722591813;
inline constexpr double kC1FirstN2ArgScan = 3.7321727619043998381;
inline constexpr double kC1FirstN2Closed = 0.066987298107780676618;
inline constexpr double kC1FirstN2ArgClosed = 3.7320508075688772935;
inline constexpr double kCGammaScan = 0.20710678044426700239;
inline constexpr double kCGammaArgScan = 1.5538243178715989146;
inline constexpr double kCGammaClosed = 0.2071067811865475244;
inline constexpr double kCGammaArgClosed = 1.5537739740300373073;
inline constexpr double kCircleXi1Pow4 = 2.3561944901923449288;
inline constexpr double kSphereXi1Sq = 4.1887902047863909846;
inline constexpr double kAnisoDirE1 = 3.1415926535897932385;
inline constexpr double kAnisoDirE2 = 0.78539816339744830962;
inline constexpr double kAnisoEnergyS1P2 = 3.1415926535897932385;
inline constexpr double kAnisoStarredS1P2 = 3.5124073655203631966;
}  // namespace oracle
