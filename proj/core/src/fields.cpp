#include "affsob/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "affsob/errors.hpp"

namespace affsob {

namespace {

constexpr double kDecayExponent = 36.0;

void check_dim(int d) {
  if (d < 1 || d > kMaxDim) throw DomainError("field dimension must be between 1 and 3");
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

AnalyticField::AnalyticField(int dimension, std::vector<GaussianTerm> terms)
    : dim_(dimension), terms_(std::move(terms)) {
  check_dim(dim_);
  for (auto& t : terms_) {
    if (t.mean.size() == 0) t.mean = Eigen::VectorXd::Zero(dim_);
    t.precision = 0.5 * (t.precision + t.precision.transpose()).eval();
  }
  // drop terms that are identically zero
  std::erase_if(terms_, [](const GaussianTerm& t) { return t.coefficient == 0.0 || t.polynomial.is_zero(); });
  validate();
  compile();
}

AnalyticField AnalyticField::gaussian(const Eigen::MatrixXd& precision, const Eigen::VectorXd& mean,
                                      double coefficient, const Polynomial& poly) {
  const int n = static_cast<int>(precision.rows());
  GaussianTerm t;
  t.coefficient = coefficient;
  t.polynomial = poly;
  t.mean = mean.size() ? mean : Eigen::VectorXd::Zero(n);
  t.precision = precision;
  return AnalyticField(n, {t});
}

AnalyticField AnalyticField::standard_gaussian(int N) {
  return gaussian(Eigen::MatrixXd::Identity(N, N));
}

void AnalyticField::validate() const {
  for (const auto& t : terms_) {
    if (t.mean.size() != dim_ || t.precision.rows() != dim_ || t.precision.cols() != dim_)
      throw DomainError("GaussianTerm: mean/precision dimension mismatch");
    if (!t.precision.allFinite() || !t.mean.allFinite() || !std::isfinite(t.coefficient))
      throw DomainError("GaussianTerm: non-finite entries");
    if ((t.precision - t.precision.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, t.precision.cwiseAbs().maxCoeff()))
      throw DomainError("GaussianTerm: precision not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.precision, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("GaussianTerm: precision not positive definite");
    for (const auto& [e, c] : t.polynomial.coefficients()) {
      if (c == 0.0) throw DomainError("GaussianTerm: zero coefficient stored");
      for (int i = dim_; i < kMaxDim; ++i)
        if (e[i] != 0) throw DomainError("GaussianTerm: polynomial uses an axis beyond the dimension");
    }
  }
}

void AnalyticField::compile() {
  compiled_.clear();
  for (const auto& t : terms_) {
    Compiled c{};
    c.coef = t.coefficient;
    for (int i = 0; i < dim_; ++i) {
      c.mean[i] = t.mean[i];
      for (int j = 0; j < dim_; ++j) c.prec[i * 3 + j] = t.precision(i, j);
    }
    const Exponent deg = t.polynomial.axis_degrees();
    for (int i = 0; i < 3; ++i) c.maxdeg[i] = deg[i];
    c.unit_poly = t.polynomial.is_constant_one();
    for (const auto& [e, v] : t.polynomial.coefficients()) {
      c.exps.push_back({e[0], e[1], e[2]});
      c.coefs.push_back(v);
    }
    compiled_.push_back(std::move(c));
  }
}

double AnalyticField::operator()(const double* x) const {
  double sum = 0.0;
  for (const Compiled& t : compiled_) {
    double d[3];
    for (int i = 0; i < dim_; ++i) d[i] = x[i] - t.mean[i];
    double q = 0.0;
    for (int i = 0; i < dim_; ++i) {
      double r = 0.0;
      for (int j = 0; j < dim_; ++j) r += t.prec[i * 3 + j] * d[j];
      q += d[i] * r;
    }
    const double e = std::exp(-0.5 * q);
    if (e == 0.0) continue;
    if (t.unit_poly) {
      sum += t.coef * e;
      continue;
    }
    const double poly = poly_value(t, x);
    sum += t.coef * poly * e;
  }
  return sum;
}

double AnalyticField::poly_value(const Compiled& t, const double* x) const {
  double pw[3][24];
  for (int i = 0; i < dim_; ++i) {
    pw[i][0] = 1.0;
    const int md = std::min(t.maxdeg[i], 23);
    for (int k = 1; k <= md; ++k) pw[i][k] = pw[i][k - 1] * x[i];
  }
  double poly = 0.0;
  for (std::size_t k = 0; k < t.exps.size(); ++k) {
    double term = t.coefs[k];
    for (int i = 0; i < dim_; ++i) {
      const int ex = t.exps[k][i];
      term *= ex < 24 ? pw[i][ex] : std::pow(x[i], ex);
    }
    poly += term;
  }
  return poly;
}

void AnalyticField::restrict_to_line(const double* x0, const double* dir, Line& out) const {
  out.dim_ = dim_;
  out.owner_ = this;
  for (int i = 0; i < dim_; ++i) {
    out.x0_[i] = x0[i];
    out.dir_[i] = dir[i];
  }
  out.terms_.clear();
  for (const Compiled& t : compiled_) {
    double d[3], Ad[3] = {0, 0, 0}, Av[3] = {0, 0, 0};
    for (int i = 0; i < dim_; ++i) d[i] = x0[i] - t.mean[i];
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        Ad[i] += t.prec[i * 3 + j] * d[j];
        Av[i] += t.prec[i * 3 + j] * dir[j];
      }
    double a = 0, b = 0, c = 0;
    for (int i = 0; i < dim_; ++i) {
      a += dir[i] * Av[i];
      b += 2.0 * dir[i] * Ad[i];
      c += d[i] * Ad[i];
    }
    out.terms_.push_back({t.coef, -0.5 * a, -0.5 * b, -0.5 * c, t.unit_poly ? nullptr : &t});
  }
}

double AnalyticField::Line::operator()(double u) const {
  double sum = 0.0;
  for (const Term& t : terms_) {
    const double e = std::exp((t.a * u + t.b) * u + t.c);
    if (t.poly == nullptr) {
      sum += t.coef * e;
    } else if (e != 0.0) {
      double x[3];
      for (int i = 0; i < dim_; ++i) x[i] = x0_[i] + u * dir_[i];
      sum += t.coef * e * owner_->poly_value(*static_cast<const Compiled*>(t.poly), x);
    }
  }
  return sum;
}

double AnalyticField::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DomainError("evaluate: dimension mismatch");
  return (*this)(x.data());
}

AnalyticField AnalyticField::scaled(double c) const {
  std::vector<GaussianTerm> ts = terms_;
  for (auto& t : ts) t.coefficient *= c;
  return AnalyticField(dim_, std::move(ts));
}

AnalyticField AnalyticField::operator+(const AnalyticField& o) const {
  if (o.dim_ != dim_) throw DomainError("field sum: dimension mismatch");
  std::vector<GaussianTerm> ts = terms_;
  ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
  return AnalyticField(dim_, std::move(ts));
}

AnalyticField AnalyticField::derivative_along(const Eigen::VectorXd& v) const {
  if (v.size() != dim_) throw DomainError("derivative: dimension mismatch");
  std::vector<GaussianTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    // ∂_v [q e^{-φ}] = (∂_v q - q · vᵀA(x-μ)) e^{-φ}
    const Eigen::VectorXd Av = t.precision * v;
    const Polynomial lin = Polynomial::linear(Av, -Av.dot(t.mean));
    GaussianTerm d = t;
    d.polynomial = t.polynomial.directional_derivative(v) - t.polynomial * lin;
    if (!d.polynomial.is_zero()) out.push_back(std::move(d));
  }
  return AnalyticField(dim_, std::move(out));
}

AnalyticField AnalyticField::partial(int axis) const {
  if (axis < 0 || axis >= dim_) throw DomainError("partial: axis out of range");
  return derivative_along(Eigen::VectorXd::Unit(dim_, axis));
}

DecayBound AnalyticField::decay_bound() const {
  DecayBound b;
  if (terms_.empty()) return b;
  double cmin = std::numeric_limits<double>::infinity();
  for (const auto& t : terms_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.precision, Eigen::EigenvaluesOnly);
    cmin = std::min(cmin, es.eigenvalues().minCoeff() / 8.0);
  }
  b.c = cmin;
  for (const auto& t : terms_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.precision, Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().minCoeff();
    double P = 0.0;
    for (const auto& [e, c] : t.polynomial.coefficients()) P += std::abs(c);
    const int d = t.polynomial.degree();
    // sup_r (1+r)^d e^{-λ r²/8}
    const double r = 0.5 * (-1.0 + std::sqrt(1.0 + 16.0 * d / lam));
    const double M = std::pow(1.0 + r, d) * std::exp(-lam * r * r / 8.0);
    b.C += std::abs(t.coefficient) * P * M * std::exp(0.5 * lam * t.mean.squaredNorm());
  }
  return b;
}

IntegrationFrame AnalyticField::integration_frame(double min_half_width) const {
  if (terms_.empty()) return IntegrationFrame::standard(dim_, min_half_width);
  const int n = dim_;
  std::vector<double> w;
  double wsum = 0.0;
  for (const auto& t : terms_) {
    double P = 0.0;
    for (const auto& [e, c] : t.polynomial.coefficients()) P += std::abs(c);
    const double wk = std::abs(t.coefficient) * P / std::sqrt(t.precision.determinant());
    w.push_back(wk);
    wsum += wk;
  }
  Eigen::VectorXd center = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < terms_.size(); ++k) center += (w[k] / wsum) * terms_[k].mean;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const Eigen::VectorXd dm = terms_[k].mean - center;
    cov += (w[k] / wsum) * (terms_[k].precision.inverse() + dm * dm.transpose());
  }
  cov = 0.5 * (cov + cov.transpose()).eval();
  IntegrationFrame fr;
  fr.center = center;
  fr.basis = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();
  const Eigen::MatrixXd Winv = fr.basis.inverse();
  double L = min_half_width;
  for (const auto& t : terms_) {
    const Eigen::MatrixXd B = fr.basis.transpose() * t.precision * fr.basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()), Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().minCoeff();
    const double nu = (Winv * (t.mean - center)).norm();
    const int d = t.polynomial.degree();
    const double rho = std::sqrt((2.0 * kDecayExponent + 4.0 * d) / lam);
    L = std::max(L, nu + rho);
  }
  fr.half_width = L;
  return fr;
}

AnalyticField directional_derivative(const AnalyticField& f, const Eigen::VectorXd& xi, int order) {
  if (order < 1) throw DomainError("directional_derivative: order must be >= 1");
  if (xi.size() != f.dimension()) throw DomainError("directional_derivative: dimension mismatch");
  if (std::abs(xi.norm() - 1.0) > 1e-12) throw DomainError("directional_derivative: direction must be a unit vector");
  AnalyticField g = f;
  for (int k = 0; k < order; ++k) g = g.derivative_along(xi);
  return g;
}

AnalyticField affine_compose(const AnalyticField& f, const Eigen::MatrixXd& T) {
  const int n = f.dimension();
  if (T.rows() != n || T.cols() != n) throw DomainError("affine_compose: dimension mismatch");
  const double det = T.determinant();
  if (std::abs(det) <= 1e-12) throw DomainError("affine_compose: singular matrix");
  const Eigen::MatrixXd Tinv = T.inverse();
  std::vector<GaussianTerm> out;
  for (const auto& t : f.terms()) {
    GaussianTerm c;
    c.coefficient = t.coefficient;
    c.mean = Tinv * t.mean;
    c.precision = T.transpose() * t.precision * T;
    c.precision = 0.5 * (c.precision + c.precision.transpose()).eval();
    c.polynomial = t.polynomial.is_constant_one() ? t.polynomial : t.polynomial.compose_linear(T);
    out.push_back(std::move(c));
  }
  return AnalyticField(n, std::move(out));
}

double OrderPartials::diagonal(const double* xi, const double* values) const {
  double s = 0.0;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    double m = weights[k];
    for (int i = 0; i < dim; ++i)
      for (int e = 0; e < alphas[k][i]; ++e) m *= xi[i];
    s += m * values[k];
  }
  return s;
}

OrderPartials partials_of_order(const AnalyticField& f, int s) {
  if (s < 1) throw DomainError("partials_of_order: order must be >= 1");
  OrderPartials op;
  op.order = s;
  op.dim = f.dimension();
  const int n = f.dimension();
  // enumerate α with |α| = s, building fields incrementally
  std::function<void(int, int, Exponent, const AnalyticField&)> rec =
      [&](int axis, int left, Exponent a, const AnalyticField& g) {
        if (axis == n - 1) {
          a[axis] = left;
          AnalyticField h = g;
          for (int k = 0; k < left; ++k) h = h.partial(axis);
          double w = std::tgamma(s + 1.0);
          for (int i = 0; i < n; ++i) w /= std::tgamma(a[i] + 1.0);
          op.alphas.push_back(a);
          op.weights.push_back(std::round(w));
          op.fields.push_back(std::move(h));
          return;
        }
        AnalyticField h = g;
        for (int k = 0; k <= left; ++k) {
          a[axis] = k;
          rec(axis + 1, left - k, a, h);
          if (k < left) h = h.partial(axis);
        }
      };
  rec(0, s, Exponent{0, 0, 0}, f);
  return op;
}

namespace {

template <class F>
double golden_max(F&& fn, double a, double b, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = fn(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

double maximize_diagonal(const OrderPartials& parts, const double* values, const SphereQuadrature& sphere) {
  const int n = parts.dim;
  double best = -1.0;
  std::size_t arg = 0;
  for (std::size_t j = 0; j < sphere.size(); ++j) {
    const double v = std::abs(parts.diagonal(sphere.nodes[j].data(), values));
    if (v > best) {
      best = v;
      arg = j;
    }
  }
  if (n == 1) return best;
  const double pi = std::numbers::pi;
  if (n == 2) {
    const double th0 = std::atan2(sphere.nodes[arg][1], sphere.nodes[arg][0]);
    const double dth = 2.0 * pi / static_cast<double>(sphere.size());
    auto fn = [&](double th) {
      const double xi[2] = {std::cos(th), std::sin(th)};
      return std::abs(parts.diagonal(xi, values));
    };
    return std::max(best, golden_max(fn, th0 - dth, th0 + dth, 1e-10));
  }
  // N = 3: alternating golden searches in polar/azimuthal angles
  const Eigen::VectorXd& v0 = sphere.nodes[arg];
  double th = std::acos(std::clamp(v0[2], -1.0, 1.0));
  double ph = std::atan2(v0[1], v0[0]);
  auto eval = [&](double t, double p) {
    const double xi[3] = {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
    return std::abs(parts.diagonal(xi, values));
  };
  double dth = pi / sphere.resolution, dph = pi / sphere.resolution;
  for (int sweep = 0; sweep < 6; ++sweep) {
    double tb = th, pb = ph, vb = eval(th, ph);
    auto search = [&](bool polar) {
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = (polar ? th : ph) - (polar ? dth : dph), b = (polar ? th : ph) + (polar ? dth : dph);
      auto f = [&](double u) { return polar ? eval(u, ph) : eval(th, u); };
      double c = b - g * (b - a), d = a + g * (b - a);
      double fc = f(c), fd = f(d);
      while (b - a > 1e-10) {
        if (fc >= fd) { b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c); }
        else { a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d); }
      }
      const double u = fc >= fd ? c : d;
      if (std::max(fc, fd) > vb) {
        vb = std::max(fc, fd);
        (polar ? tb : pb) = u;
      }
    };
    search(true);
    th = tb;
    search(false);
    ph = pb;
    best = std::max(best, vb);
    dth *= 0.5;
    dph *= 0.5;
  }
  return best;
}

double multilinear_norm(const AnalyticField& f, int s, const Eigen::VectorXd& x, const SphereQuadrature& sphere) {
  if (s < 1) throw DomainError("multilinear_norm: s must be >= 1");
  if (x.size() != f.dimension() || sphere.dim != f.dimension())
    throw DomainError("multilinear_norm: dimension mismatch");
  const OrderPartials parts = partials_of_order(f, s);
  std::vector<double> vals(parts.fields.size());
  for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = parts.fields[k](x.data());
  return maximize_diagonal(parts, vals.data(), sphere);
}

Evaluator finite_difference(const AnalyticField& f, const Eigen::VectorXd& h, int m) {
  if (m < 1) throw DomainError("finite_difference: m must be >= 1");
  if (h.size() != f.dimension()) throw DomainError("finite_difference: dimension mismatch");
  return [f, h, m](const Eigen::VectorXd& x) {
    if (x.size() != f.dimension()) throw DomainError("finite_difference: dimension mismatch");
    double s = 0.0;
    for (int l = 0; l <= m; ++l) {
      const double c = binomial(m, l) * ((m - l) % 2 ? -1.0 : 1.0);
      const Eigen::VectorXd y = x + l * h;
      s += c * f(y.data());
    }
    return s;
  };
}

Evaluator finite_difference(const GridField& f, const Eigen::VectorXd& h, int m) {
  if (m < 1) throw DomainError("finite_difference: m must be >= 1");
  if (h.size() != f.dimension()) throw DomainError("finite_difference: dimension mismatch");
  return [f, h, m](const Eigen::VectorXd& x) {
    if (x.size() != f.dimension()) throw DomainError("finite_difference: dimension mismatch");
    double s = 0.0;
    for (int l = 0; l <= m; ++l) {
      const double c = binomial(m, l) * ((m - l) % 2 ? -1.0 : 1.0);
      const Eigen::VectorXd y = x + l * h;
      s += c * f(y.data());
    }
    return s;
  };
}

}  // namespace affsob
