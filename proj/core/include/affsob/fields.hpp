#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "affsob/polynomial.hpp"
#include "affsob/quadrature.hpp"

namespace affsob {

// c · q(x) · exp(-(x-μ)ᵀ A (x-μ) / 2)
struct GaussianTerm {
  double coefficient = 1.0;
  Polynomial polynomial = Polynomial::constant(1.0);
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision;
};

struct DecayBound {
  double C = 0.0;  // |f(x)| <= C exp(-c |x|^2)
  double c = 1.0;
};

class AnalyticField {
 public:
  explicit AnalyticField(int dimension = 2, std::vector<GaussianTerm> terms = {});

  static AnalyticField gaussian(const Eigen::MatrixXd& precision, const Eigen::VectorXd& mean = {},
                                double coefficient = 1.0,
                                const Polynomial& poly = Polynomial::constant(1.0));
  static AnalyticField standard_gaussian(int N);

  int dimension() const { return dim_; }
  const std::vector<GaussianTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Unchecked hot-path evaluation; x has dimension() entries.
  double operator()(const double* x) const;
  double evaluate(const Eigen::VectorXd& x) const;

  AnalyticField scaled(double c) const;
  AnalyticField operator+(const AnalyticField& o) const;
  // Derivative along an arbitrary (not necessarily unit) vector.
  AnalyticField derivative_along(const Eigen::VectorXd& v) const;
  AnalyticField partial(int axis) const;

  DecayBound decay_bound() const;
  // Affine frame in which every term is below e^{-36} of its scale outside
  // the box of half width >= min_half_width.
  IntegrationFrame integration_frame(double min_half_width = 8.0) const;

  // Throws DomainError if a term breaks the class invariants.
  void validate() const;

  // u ↦ f(x0 + u·dir), with each term's exponent reduced to a quadratic in u.
  class Line {
   public:
    double operator()(double u) const;

   private:
    friend class AnalyticField;
    struct Term {
      double coef, a, b, c;
      const void* poly;  // compiled polynomial, null for q ≡ 1
    };
    int dim_ = 0;
    double x0_[3] = {0, 0, 0};
    double dir_[3] = {0, 0, 0};
    std::vector<Term> terms_;
    const AnalyticField* owner_ = nullptr;
  };
  void restrict_to_line(const double* x0, const double* dir, Line& out) const;

 private:
  struct Compiled {
    double coef;
    double mean[3];
    double prec[9];
    int maxdeg[3];
    bool unit_poly;
    std::vector<std::array<int, 3>> exps;
    std::vector<double> coefs;
  };
  void compile();
  double poly_value(const Compiled& t, const double* x) const;

  int dim_;
  std::vector<GaussianTerm> terms_;
  std::vector<Compiled> compiled_;
};

// ∂^k_ξ f = d^k/dt^k f(x + tξ)|_{t=0}; ξ must be a unit vector.
AnalyticField directional_derivative(const AnalyticField& f, const Eigen::VectorXd& xi, int order);
// x ↦ f(T x)
AnalyticField affine_compose(const AnalyticField& f, const Eigen::MatrixXd& T);

// ∂^α f for every |α| = s together with the multinomial weights s!/α!,
// so that ∂^s_ξ f = Σ_α weight_α ξ^α ∂^α f.
struct OrderPartials {
  int order = 0;
  int dim = 2;
  std::vector<Exponent> alphas;
  std::vector<double> weights;
  std::vector<AnalyticField> fields;

  // Σ_α weight_α ξ^α v_α for sampled partial values v.
  double diagonal(const double* xi, const double* values) const;
};
OrderPartials partials_of_order(const AnalyticField& f, int s);

// max_{|ξ|=1} |Σ_α w_α ξ^α v_α|: sphere-node sampling plus golden-section
// refinement around the best node.
double maximize_diagonal(const OrderPartials& parts, const double* values, const SphereQuadrature& sphere);

// ‖D^s_x f‖ as a symmetric multilinear form, attained on the diagonal.
double multilinear_norm(const AnalyticField& f, int s, const Eigen::VectorXd& x, const SphereQuadrature& sphere);

class GridField {
 public:
  // Uniform grid, centred at the origin: node i on axis a sits at
  // (i - (shape[a]-1)/2) * spacing[a]. Values in row-major order (last axis fastest).
  GridField(std::vector<int> shape, std::vector<double> spacing, std::vector<double> values,
            double support_radius);

  // Samples f on an n^N grid covering [-half_extent, half_extent]^N and
  // zeroes a boundary layer `layer` nodes wide.
  static GridField sample(int dim, int n, double half_extent,
                          const std::function<double(const double*)>& f, double support_radius,
                          int layer = 2);
  // Text format: "N n_1 .. n_N h R" then the values.
  static GridField load(const std::string& path);
  void save(const std::string& path) const;

  int dimension() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<double>& values() const { return values_; }
  double support_radius() const { return R_; }
  double cell_volume() const;
  double coordinate(int axis, int i) const;
  std::size_t index(const int* idx) const;
  std::size_t size() const { return values_.size(); }

  // Multilinear interpolation inside the sampled box, 0 outside.
  double operator()(const double* x) const;
  double evaluate(const Eigen::VectorXd& x) const;

  GridField scaled(double c) const;
  // x ↦ f(T x) resampled on the same grid by interpolation.
  GridField compose(const Eigen::MatrixXd& T) const;
  // Largest |value| within `layer` nodes of the boundary.
  double boundary_max(int layer) const;

 private:
  std::vector<int> shape_;
  std::vector<double> spacing_;
  std::vector<double> values_;
  double R_;
  std::vector<std::size_t> strides_;
};

using Evaluator = std::function<double(const Eigen::VectorXd&)>;

// x ↦ Σ_{l=0}^m C(m,l)(-1)^{m-l} f(x + l h)
Evaluator finite_difference(const AnalyticField& f, const Eigen::VectorXd& h, int m);
Evaluator finite_difference(const GridField& f, const Eigen::VectorXd& h, int m);

double binomial(int n, int k);

}  // namespace affsob
