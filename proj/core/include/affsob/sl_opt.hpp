#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "affsob/fields.hpp"
#include "affsob/quadrature.hpp"
#include "affsob/seminorms.hpp"

namespace affsob {

class UnimodularTransform {
 public:
  explicit UnimodularTransform(int N = 2);
  // Rescales M by det(M)^{-1/N}. Throws DomainError unless det(M) > 0 and M is finite.
  explicit UnimodularTransform(const Eigen::MatrixXd& M);

  const Eigen::MatrixXd& matrix() const { return T_; }
  int dim() const { return static_cast<int>(T_.rows()); }
  // T·exp(τB) for trace-free B, renormalized.
  UnimodularTransform retract(const Eigen::MatrixXd& B, double tau) const;
  double det_error() const { return std::abs(T_.determinant() - 1.0); }

 private:
  Eigen::MatrixXd T_;
};

// Frobenius-orthonormal basis of the trace-free matrices.
std::vector<Eigen::MatrixXd> sl_basis(int N);

struct OptimizerOptions {
  int max_iters = 500;
  double grad_tol = 1e-6;  // relative to the objective
  double initial_step = 1.0;
  double backtrack = 0.5;
  int max_backtracks = 40;
  int restarts = 0;
  double fd_epsilon = 1e-4;
  std::uint64_t seed = 1;

  // Throws ConfigError on non-positive entries or backtrack outside (0, 1).
  void validate() const;
};

struct TraceEntry {
  double objective = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  std::uint64_t hash = 0;  // FNV-1a of the matrix entries
};

struct OptimizerTrace {
  std::vector<TraceEntry> entries;
  std::string reason;  // "converged", "max_iters", "no_descent"
  bool stalled = false;
};

struct MinimizeResult {
  UnimodularTransform T;
  double value = 0.0;
  OptimizerTrace trace;
};

// |f∘T|_{W^{s,p}}
double objective(const AnalyticField& f, const UnimodularTransform& T, const SmoothnessParams& params,
                 const QuadratureBundle& quads);

// Riemannian gradient of T ↦ ‖∇(f∘T)‖_p along the retraction T·exp(εB), as a trace-free matrix.
Eigen::MatrixXd exact_gradient_s1(const AnalyticField& f, const UnimodularTransform& T, double p,
                                  const QuadratureBundle& quads);
// Central differences of the objective along sl_basis().
Eigen::MatrixXd numeric_gradient(const AnalyticField& f, const UnimodularTransform& T,
                                 const SmoothnessParams& params, const QuadratureBundle& quads,
                                 double fd_epsilon = 1e-4);

// Armijo descent from the identity, plus opts.restarts seeded random starts;
// the best run is returned (its trace is the one kept).
MinimizeResult minimize(const AnalyticField& f, const SmoothnessParams& params, const OptimizerOptions& opts,
                        const QuadratureBundle& quads);

struct CriticalResiduals {
  double general = 0.0;
  double diag = 0.0;
};
CriticalResiduals critical_residuals(const AnalyticField& f, const UnimodularTransform& T, double p,
                                     const QuadratureBundle& quads);

struct DescentStep {
  Eigen::MatrixXd T;
  double old_value = 0.0;
  double new_value = 0.0;
};
// T = Oᵀ diag(λ, μ, …, μ) O with Oξ = e₁ and μ = λ^{-1/(N-1)}.
DescentStep descent_step(const AnalyticField& f, const SmoothnessParams& params, const Eigen::VectorXd& xi,
                         double lambda, const QuadratureBundle& quads);
Eigen::MatrixXd descent_matrix(const Eigen::VectorXd& xi, double lambda);

struct DirectionalBoundReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double threshold = 0.0;
  Eigen::VectorXd weakest;
  bool pass = false;
};
// Ratios D(f∘T, ξ)^{1/p} / |f∘T|_{W^{s,p}} over the sphere nodes; passes when
// the minimum is >= threshold (threshold <= 0 asks for strict positivity).
DirectionalBoundReport directional_lower_bound_check(const AnalyticField& f, const UnimodularTransform& T,
                                                     const SmoothnessParams& params, const QuadratureBundle& quads,
                                                     double threshold = 0.0);

// (T Tᵀ)^{1/2}: T with the rotation of its right polar factor removed.
Eigen::MatrixXd polar_align(const Eigen::MatrixXd& T);

// Seeded rotation × unit-determinant shear with condition number <= max_condition.
Eigen::MatrixXd random_unimodular(int N, double max_condition, std::uint64_t seed);

}  // namespace affsob
