#include "affsob/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "affsob/errors.hpp"

namespace affsob {

namespace {

Rule1D compute_gauss_legendre(int n) {
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Rule1D>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule1D>(compute_gauss_legendre(n));
  return *slot;
}

Rule1D composite_gauss(double a, double b, int panels, int order) {
  const Rule1D& g = gauss_legendre(order);
  Rule1D r;
  r.x.reserve(static_cast<std::size_t>(panels) * order);
  r.w.reserve(r.x.capacity());
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      r.x.push_back(mid + 0.5 * h * g.x[i]);
      r.w.push_back(0.5 * h * g.w[i]);
    }
  }
  return r;
}

IntegrationFrame IntegrationFrame::standard(int dim, double half_width) {
  IntegrationFrame f;
  f.center = Eigen::VectorXd::Zero(dim);
  f.basis = Eigen::MatrixXd::Identity(dim, dim);
  f.half_width = half_width;
  return f;
}

BoxQuadrature::BoxQuadrature(int dim, double half_width, int nodes_per_axis)
    : dim_(dim), L_(half_width), n_(nodes_per_axis) {
  if (dim < 1 || dim > 3) throw DomainError("BoxQuadrature: dimension must be 1..3");
  if (half_width <= 0) throw DomainError("BoxQuadrature: half width must be positive");
  if (nodes_per_axis < 1) throw DomainError("BoxQuadrature: nodes_per_axis must be >= 1");
  order_ = std::min(nodes_per_axis, 8);
  panels_ = (nodes_per_axis + order_ - 1) / order_;
  axis_ = composite_gauss(-L_, L_, panels_, order_);
}

std::size_t BoxQuadrature::size() const {
  std::size_t s = 1;
  for (int i = 0; i < dim_; ++i) s *= axis_.size();
  return s;
}

void BoxQuadrature::node(std::size_t k, double* y, double* w) const {
  const std::size_t n = axis_.size();
  double ww = 1.0;
  for (int i = dim_ - 1; i >= 0; --i) {
    const std::size_t idx = k % n;
    k /= n;
    y[i] = axis_.x[idx];
    ww *= axis_.w[idx];
  }
  *w = ww;
}

double BoxQuadrature::weight_sum() const {
  double s = 0.0;
  double y[3];
  double w;
  for (std::size_t k = 0; k < size(); ++k) {
    node(k, y, &w);
    s += w;
  }
  return s;
}

double integrate_box(const PointFunction& g, const BoxQuadrature& q) {
  return integrate_box(g, q, IntegrationFrame::standard(q.dim(), q.half_width()));
}

double integrate_box(const PointFunction& g, const BoxQuadrature& q, const IntegrationFrame& frame) {
  const int d = q.dim();
  double y[3], x[3], w;
  double sum = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    q.node(k, y, &w);
    for (int i = 0; i < d; ++i) {
      double xi = frame.center[i];
      for (int j = 0; j < d; ++j) xi += frame.basis(i, j) * y[j];
      x[i] = xi;
    }
    const double v = g(x);
    if (!std::isfinite(v)) throw NumericalError("integrate_box: non-finite sample");
    sum += w * v;
  }
  return sum * frame.jacobian();
}

double SphereQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double SphereQuadrature::integrate(const std::function<double(const Eigen::VectorXd&)>& g) const {
  double s = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) s += weights[j] * g(nodes[j]);
  return s;
}

double sphere_area(int N) {
  // 2 π^{N/2} / Γ(N/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

SphereQuadrature build_sphere_quadrature(int N, int resolution) {
  if (N != 2 && N != 3) throw DomainError("build_sphere_quadrature: only N = 2 or 3 supported");
  if (resolution < 8) throw DomainError("build_sphere_quadrature: resolution must be >= 8");
  SphereQuadrature sq;
  sq.dim = N;
  sq.resolution = resolution;
  const double pi = std::numbers::pi;
  if (N == 2) {
    const int n = resolution;
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * pi * j / n;
      Eigen::VectorXd v(2);
      v << std::cos(th), std::sin(th);
      sq.nodes.push_back(v);
      sq.weights.push_back(2.0 * pi / n);
      sq.antipode.push_back(n % 2 == 0 ? (j + n / 2) % n : -1);
    }
  } else {
    const int nt = resolution;
    const int np = 2 * resolution;
    const Rule1D& g = gauss_legendre(nt);
    for (int i = 0; i < nt; ++i) {
      const double c = g.x[i];
      const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int k = 0; k < np; ++k) {
        const double ph = 2.0 * pi * (k + 0.5) / np;
        Eigen::VectorXd v(3);
        v << sn * std::cos(ph), sn * std::sin(ph), c;
        v.normalize();
        sq.nodes.push_back(v);
        sq.weights.push_back(g.w[i] * 2.0 * pi / np);
        const int ia = nt - 1 - i;
        const int ka = (k + np / 2) % np;
        sq.antipode.push_back(ia * np + ka);
      }
    }
  }
  return sq;
}

RadialNodes radial_nodes(double s, double p, const RadialQuadrature& rq) {
  RadialNodes rn;
  const double a = std::log(rq.t_min), b = std::log(rq.t_max);
  const Rule1D u = composite_gauss(a, b, rq.panels, rq.order);
  rn.t.resize(u.size());
  rn.w.resize(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double t = std::exp(u.x[k]);
    rn.t[k] = t;
    rn.w[k] = u.w[k] * std::exp(-s * p * u.x[k]);  // t^{-sp-1}·t
  }
  return rn;
}

RadialIntegral assemble_radial(const RadialNodes& nodes, const std::vector<double>& g_values,
                               double g_at_tmin, double s, double p, int m,
                               const RadialQuadrature& rq, std::optional<double> tail_level) {
  const double head_exp = (m - s) * p;
  if (head_exp <= 0) throw DomainError("integrate_radial: head exponent (m-s)p must be positive");
  RadialIntegral r;
  double sup_g = g_at_tmin;
  for (std::size_t k = 0; k < nodes.t.size(); ++k) {
    if (!std::isfinite(g_values[k])) throw NumericalError("integrate_radial: non-finite sample");
    r.body += nodes.w[k] * g_values[k];
    sup_g = std::max(sup_g, g_values[k]);
  }
  const double c = g_at_tmin / std::pow(rq.t_min, m * p);
  r.head = c * std::pow(rq.t_min, head_exp) / head_exp;
  const double tail_decay = std::pow(rq.t_max, -s * p) / (s * p);
  r.tail_width = std::pow(2.0, m * p) * sup_g * tail_decay;
  if (tail_level) {
    r.tail = *tail_level * tail_decay;
  } else {
    r.tail = 0.5 * r.tail_width;
  }
  r.value = r.head + r.body + r.tail;
  return r;
}

RadialIntegral integrate_radial(const std::function<double(double)>& g, double s, double p, int m,
                                const RadialQuadrature& rq, std::optional<double> tail_level) {
  if (!(rq.t_min > 0 && rq.t_min < rq.t_max)) throw DomainError("integrate_radial: need 0 < t_min < t_max");
  if ((m - s) * p <= 0) throw DomainError("integrate_radial: head exponent (m-s)p must be positive");
  const RadialNodes nodes = radial_nodes(s, p, rq);
  std::vector<double> vals(nodes.t.size());
  for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = g(nodes.t[k]);
  return assemble_radial(nodes, vals, g(rq.t_min), s, p, m, rq, tail_level);
}

double pushforward_weight(const Eigen::MatrixXd& T, const Eigen::VectorXd& omega) {
  const double det = T.determinant();
  if (std::abs(det) <= 1e-12) throw DomainError("pushforward_weight: singular T");
  const double n = (T * omega).norm();
  return std::abs(det) / std::pow(n, static_cast<double>(T.rows()));
}

QuadratureSettings QuadratureSettings::doubled() const {
  QuadratureSettings d = *this;
  d.box_nodes *= 2;
  d.sphere_nodes *= 2;
  d.t_panels *= 2;
  return d;
}

QuadratureSettings QuadratureSettings::halved_sphere() const {
  QuadratureSettings d = *this;
  d.sphere_nodes = std::max(8, sphere_nodes / 2);
  return d;
}

int QuadratureSettings::sphere_resolution(int N) const {
  return N == 2 ? sphere_nodes : std::max(8, sphere_nodes / 8);
}

QuadratureBundle::QuadratureBundle(int N, const QuadratureSettings& s)
    : settings(s), sphere(build_sphere_quadrature(N, s.sphere_resolution(N))) {}

RadialQuadrature QuadratureBundle::radial() const {
  return RadialQuadrature{settings.t_min, settings.t_max, settings.t_panels, settings.t_order};
}

}  // namespace affsob
