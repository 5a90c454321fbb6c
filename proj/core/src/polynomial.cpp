#include "affsob/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace affsob {

Polynomial Polynomial::constant(double c) {
  Polynomial q;
  q.add_term(Exponent{0, 0, 0}, c);
  return q;
}

Polynomial Polynomial::monomial(const Exponent& e, double c) {
  Polynomial q;
  q.add_term(e, c);
  return q;
}

Polynomial Polynomial::linear(const Eigen::VectorXd& a, double b) {
  Polynomial q;
  q.add_term(Exponent{0, 0, 0}, b);
  for (int i = 0; i < a.size(); ++i) {
    Exponent e{0, 0, 0};
    e[i] = 1;
    q.add_term(e, a[i]);
  }
  return q;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : coeffs_) d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

Exponent Polynomial::axis_degrees() const {
  Exponent d{0, 0, 0};
  for (const auto& [e, c] : coeffs_)
    for (int i = 0; i < kMaxDim; ++i) d[i] = std::max(d[i], e[i]);
  return d;
}

bool Polynomial::is_constant_one() const {
  return coeffs_.size() == 1 && coeffs_.begin()->first == Exponent{0, 0, 0} &&
         coeffs_.begin()->second == 1.0;
}

void Polynomial::add_term(const Exponent& e, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = coeffs_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) coeffs_.erase(it);
  }
}

double Polynomial::evaluate(const double* x, int dim) const {
  if (coeffs_.empty()) return 0.0;
  const Exponent deg = axis_degrees();
  std::array<std::array<double, 16>, kMaxDim> pw{};
  for (int i = 0; i < dim; ++i) {
    pw[i][0] = 1.0;
    for (int k = 1; k <= deg[i] && k < 16; ++k) pw[i][k] = pw[i][k - 1] * x[i];
  }
  double sum = 0.0;
  for (const auto& [e, c] : coeffs_) {
    double term = c;
    for (int i = 0; i < dim; ++i) term *= e[i] < 16 ? pw[i][e[i]] : std::pow(x[i], e[i]);
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [e, c] : o.coeffs_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [e1, c1] : coeffs_)
    for (const auto& [e2, c2] : o.coeffs_) {
      Exponent e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
      r.add_term(e, c1 * c2);
    }
  return r;
}

Polynomial Polynomial::operator*(double c) const {
  Polynomial r;
  if (c == 0.0) return r;
  for (const auto& [e, v] : coeffs_) r.add_term(e, v * c);
  return r;
}

Polynomial Polynomial::derivative(int axis) const {
  Polynomial r;
  for (const auto& [e, c] : coeffs_) {
    if (e[axis] == 0) continue;
    Exponent d = e;
    d[axis] -= 1;
    r.add_term(d, c * e[axis]);
  }
  return r;
}

Polynomial Polynomial::directional_derivative(const Eigen::VectorXd& xi) const {
  Polynomial r;
  for (int i = 0; i < xi.size(); ++i)
    if (xi[i] != 0.0) r = r + derivative(i) * xi[i];
  return r;
}

Polynomial Polynomial::compose_linear(const Eigen::MatrixXd& T) const {
  const int n = static_cast<int>(T.rows());
  // (T x)_i as linear polynomials, and cached powers of them
  std::vector<std::vector<Polynomial>> powers(n);
  const Exponent deg = axis_degrees();
  for (int i = 0; i < n; ++i) {
    Polynomial row = Polynomial::linear(T.row(i).transpose(), 0.0);
    powers[i].push_back(Polynomial::constant(1.0));
    for (int k = 1; k <= deg[i]; ++k) powers[i].push_back(powers[i].back() * row);
  }
  Polynomial r;
  for (const auto& [e, c] : coeffs_) {
    Polynomial term = Polynomial::constant(c);
    for (int i = 0; i < n; ++i)
      if (e[i] > 0) term = term * powers[i][e[i]];
    r = r + term;
  }
  return r;
}

}  // namespace affsob
