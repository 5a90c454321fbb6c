#pragma once

#include <functional>

#include "affsob/fields.hpp"
#include "affsob/quadrature.hpp"
#include "affsob/seminorms.hpp"

namespace affsob {

// Monotone bijection of [0, ∞] given as the pair (Ψ, Ψ⁻¹).
struct PsiSpec {
  std::function<double(double)> psi;
  std::function<double(double)> psi_inv;
  bool convex = true;
  // Ψ_{s,p}(x) = x^{-sp/N}, with Ψ(0) = ∞ and Ψ(∞) = 0.
  bool power = false;
  double exponent = 0.0;

  static PsiSpec identity();
  static PsiSpec power_law(double s, double p, int N);

  // Ψ(Ψ⁻¹(x)) = x to 1e-9 on a log grid and, when `convex`, second
  // differences of Ψ are >= -1e-9 there.
  bool check(double lo = 1e-3, double hi = 1e3, int points = 200) const;
};

struct EnergyResult {
  double value = 0.0;
  bool degenerate = false;  // a sphere node carried zero directional energy
  bool infinite = false;
  double tail_budget = 0.0;       // change of E when every D moves by its tail interval
  double monitor_rel_diff = 0.0;  // |E(r) - E(2r)| / E(2r), when monitored
};

EnergyResult affine_energy(const DirectionalEnergyProfile& profile);
EnergyResult affine_energy(const AnalyticField& f, const SmoothnessParams& params, const QuadratureBundle& quads);
// Same, also evaluated at twice the sphere resolution; the returned value is the
// finer one and monitor_rel_diff records the difference.
EnergyResult affine_energy_monitored(const AnalyticField& f, const SmoothnessParams& params,
                                     const QuadratureBundle& quads);

// [E^Ψ]^p = σ Ψ((1/σ) ∫ Ψ⁻¹(D) dσ)
EnergyResult psi_energy(const DirectionalEnergyProfile& profile, const PsiSpec& psi);
EnergyResult psi_energy(const AnalyticField& f, const SmoothnessParams& params, const PsiSpec& psi,
                        const QuadratureBundle& quads);

// |f|_{W^{s,p}} (fractional) or |f|*_{W^{s,p}} (integer) minus E_{s,p}(f).
double jensen_gap(const AnalyticField& f, const SmoothnessParams& params, const QuadratureBundle& quads);
double jensen_gap(const DirectionalEnergyProfile& profile);

}  // namespace affsob
