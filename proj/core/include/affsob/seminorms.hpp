#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "affsob/fields.hpp"
#include "affsob/quadrature.hpp"

namespace affsob {

struct SmoothnessParams {
  double s = 1.0;
  double p = 2.0;
  int m = 1;              // ⌊s⌋+1 (fractional) or s (integer)
  bool fractional = false;
  bool excluded = false;  // integer s >= 2 with p = 1

  // Validates s > 0, p >= 1; integrality is decided with tolerance 1e-12.
  static SmoothnessParams make(double s, double p);
};

struct DirectionalEnergy {
  double value = 0.0;
  double tail_width = 0.0;
  bool excluded_regime = false;
};

struct DirectionalEnergyProfile {
  SmoothnessParams params;
  SphereQuadrature sphere;
  std::vector<double> values;
  std::vector<double> tail_interval;
  bool excluded_regime = false;

  double integral() const;  // ∫ D dσ
  double min_value() const;
  double max_value() const;
  // Some node has zero energy relative to the largest (threshold 1e-12).
  bool degenerate() const;
};

// Box nodes per axis for f in frame fr: box_nodes scaled up for narrow terms
// and polynomial factors (at most 4x), rounded up to a multiple of 8.
int adapted_box_nodes(const AnalyticField& f, const IntegrationFrame& fr, int box_nodes);

double lp_norm(const AnalyticField& f, double p, const QuadratureBundle& quads);

DirectionalEnergy directional_energy(const AnalyticField& f, const SmoothnessParams& params,
                                     const Eigen::VectorXd& xi, const QuadratureBundle& quads);
// Fractional branch with an explicit difference order (m >= s).
DirectionalEnergy difference_energy(const AnalyticField& f, double s, double p, int m,
                                    const Eigen::VectorXd& xi, const QuadratureBundle& quads);

DirectionalEnergyProfile directional_profile(const AnalyticField& f, const SmoothnessParams& params,
                                             const QuadratureBundle& quads);

double seminorm(const AnalyticField& f, const SmoothnessParams& params, const QuadratureBundle& quads);
double starred_seminorm(const AnalyticField& f, int s, double p, const QuadratureBundle& quads);

// (2·D(f, e_i), ∫ |f(x̂, ·)|^p_{W^{s,p}(R)} dx̂) for fractional s; (‖∂_i^s f‖_p^p, same) for integer s.
std::pair<double, double> slice_seminorm_crosscheck(const AnalyticField& f, const SmoothnessParams& params,
                                                    int axis, const QuadratureBundle& quads);

struct SlicingBounds {
  double sum = 0.0;     // Σ_i D(f, u_i)^{1/p}
  double value = 0.0;   // |f|_{W^{s,p}}
  std::vector<double> terms;
};
SlicingBounds slicing_bounds(const AnalyticField& f, const SmoothnessParams& params,
                             const Eigen::MatrixXd& basis, const QuadratureBundle& quads);

// ∫ ‖Δ^{N(⌊s⌋+1)}_h f‖_p^p / |h|^{sp+N} dh
double higher_difference_energy(const AnalyticField& f, const SmoothnessParams& params,
                                const QuadratureBundle& quads);

// sup_t t·|{|f| > t}|^{1/q} over 200 log-spaced t in [1e-6·max|f|, max|f|].
double weak_quasinorm(const GridField& f, double q);

// Grid pipeline (integer s ∈ {1, 2}) by central differences on interior nodes.
double grid_lp_norm(const GridField& f, double p);
DirectionalEnergyProfile grid_directional_profile(const GridField& f, int s, double p,
                                                  const SphereQuadrature& sphere);
double grid_seminorm(const GridField& f, int s, double p);
double grid_laplacian_l1(const GridField& f);

}  // namespace affsob
