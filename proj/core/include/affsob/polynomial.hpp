#pragma once

#include <array>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace affsob {

inline constexpr int kMaxDim = 3;
using Exponent = std::array<int, kMaxDim>;

// Sparse multivariate polynomial in absolute coordinates. Exact zeros are
// never stored.
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(double c);
  static Polynomial monomial(const Exponent& e, double c);
  // a·x + b
  static Polynomial linear(const Eigen::VectorXd& a, double b);

  const std::map<Exponent, double>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const;
  // Largest exponent appearing on each axis.
  Exponent axis_degrees() const;
  bool is_constant_one() const;

  void add_term(const Exponent& e, double c);

  double evaluate(const double* x, int dim) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double c) const;

  Polynomial derivative(int axis) const;
  Polynomial directional_derivative(const Eigen::VectorXd& xi) const;
  // x ↦ q(T x)
  Polynomial compose_linear(const Eigen::MatrixXd& T) const;

  bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

 private:
  std::map<Exponent, double> coeffs_;
};

}  // namespace affsob
