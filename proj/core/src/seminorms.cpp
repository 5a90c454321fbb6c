#include "affsob/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "affsob/errors.hpp"
#include "affsob/parallel.hpp"

namespace affsob {

// box_nodes is calibrated on a unit Gaussian in its own frame (half width
// √72); narrower terms (mixtures, where the frame follows the spread of the
// means) and polynomial factors get proportionally more nodes, capped at 4×.
int adapted_box_nodes(const AnalyticField& f, const IntegrationFrame& fr, int box_nodes) {
  double factor = 1.0;
  for (const auto& t : f.terms()) {
    const Eigen::MatrixXd B = fr.basis.transpose() * t.precision * fr.basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()), Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().maxCoeff();
    const double deg = t.polynomial.degree();
    factor = std::max(factor, fr.half_width * std::sqrt(lam * (1.0 + deg / 4.0) / 72.0));
  }
  factor = std::min(factor, 4.0);
  const int n = static_cast<int>(std::ceil(box_nodes * factor - 1e-9));
  return box_nodes >= 8 ? 8 * ((n + 7) / 8) : n;
}

namespace {

constexpr double kDegenerateRatio = 1e-12;
// Smallest difference step magnitude (|t ξ|^m) sampled before the head model
// takes over; below it the m-th difference drowns in cancellation.
constexpr double kMinDifferenceScale = 1e-8;

inline double pow_p(double v, double p) {
  const double a = std::abs(v);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  return std::pow(a, p);
}

void check_field_dim(const AnalyticField& f, const QuadratureBundle& q) {
  if (f.dimension() != q.dim()) throw DomainError("field and quadrature dimensions differ");
}

void check_unit(const Eigen::VectorXd& xi, int n) {
  if (xi.size() != n) throw DomainError("direction: dimension mismatch");
  if (std::abs(xi.norm() - 1.0) > 1e-12) throw DomainError("direction must be a unit vector");
}

std::vector<double> difference_coefficients(int m) {
  std::vector<double> c(m + 1);
  for (int l = 0; l <= m; ++l) c[l] = binomial(m, l) * ((m - l) % 2 ? -1.0 : 1.0);
  return c;
}

template <class D>
double bracket_root(D& d, double a, double fa, double b, double fb) {
  // Illinois variant of regula falsi
  int side = 0;
  const double tol = 1e-13 * std::max(1.0, std::abs(a) + std::abs(b));
  double c = a;
  for (int it = 0; it < 60 && b - a > tol; ++it) {
    c = (a * fb - b * fa) / (fb - fa);
    const double fc = d(c);
    if (fc == 0.0) return c;
    if ((fc > 0) == (fb > 0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  return c;
}

// ∫_a^b |d(x)|^p dx on `panels` equal Gauss panels. Unless p is an even
// integer, a panel in which d changes sign is re-integrated piecewise between
// the roots, so the kink of |d|^p does not cost accuracy.
template <class D>
double abs_power_integral(D&& d, double a, double b, int panels, int order, double p) {
  const Rule1D& g = gauss_legendre(order);
  const double h = (b - a) / panels;
  const bool smooth = p == 2.0 || (p == std::floor(p) && static_cast<long>(p) % 2 == 0);
  double vals[64];
  double sum = 0.0;
  double prev_x = 0.0, prev_v = 0.0;
  bool have_prev = false;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h, hi = lo + h, mid = 0.5 * (lo + hi);
    double part = 0.0;
    for (int i = 0; i < order; ++i) {
      vals[i] = d(mid + 0.5 * h * g.x[i]);
      part += g.w[i] * pow_p(vals[i], p);
    }
    if (!smooth) {
      double roots[64];
      int nr = 0;
      // a crossing between the previous panel's last node and this panel's first
      // node is attributed to whichever panel contains the root
      if (have_prev && prev_v * vals[0] < 0) {
        const double r = bracket_root(d, prev_x, prev_v, mid + 0.5 * h * g.x[0], vals[0]);
        if (r >= lo) roots[nr++] = r;
      }
      for (int i = 0; i + 1 < order; ++i)
        if (vals[i] * vals[i + 1] < 0)
          roots[nr++] = bracket_root(d, mid + 0.5 * h * g.x[i], vals[i], mid + 0.5 * h * g.x[i + 1], vals[i + 1]);
      if (k + 1 < panels) {
        const double nx = hi + 0.5 * h * (1.0 + g.x[0]);
        const double nv = d(nx);
        if (vals[order - 1] * nv < 0) {
          const double r = bracket_root(d, mid + 0.5 * h * g.x[order - 1], vals[order - 1], nx, nv);
          if (r < hi) roots[nr++] = r;
        }
      }
      if (nr > 0) {
        part = 0.0;
        double s0 = lo;
        for (int j = 0; j <= nr; ++j) {
          const double s1 = j < nr ? roots[j] : hi;
          const double sm = 0.5 * (s0 + s1), sh = 0.5 * (s1 - s0);
          for (int i = 0; i < order; ++i) part += sh * g.w[i] * pow_p(d(sm + sh * g.x[i]), p);
          s0 = s1;
        }
        part *= 2.0 / h;
      }
      prev_x = mid + 0.5 * h * g.x[order - 1];
      prev_v = vals[order - 1];
      have_prev = true;
    }
    sum += 0.5 * h * part;
  }
  return sum;
}

struct FrameBox {
  IntegrationFrame frame;
  BoxQuadrature box;
};

FrameBox frame_box(const AnalyticField& f, const QuadratureSettings& s) {
  IntegrationFrame fr = f.integration_frame(s.box_halfwidth);
  BoxQuadrature box(f.dimension(), fr.half_width, adapted_box_nodes(f, fr, s.box_nodes));
  return {std::move(fr), std::move(box)};
}

bool even_power(double p) { return p == std::floor(p) && static_cast<long>(p) % 2 == 0; }

// ∫ |h|^p over the frame box of `fb`, one line along the frame's first axis per
// transverse node, with sign changes of h split out of the Gauss panels.
double line_power_integral(const AnalyticField& h, const FrameBox& fb, double p) {
  const int n = h.dimension();
  const double L = fb.box.half_width();
  const BoxQuadrature transverse(std::max(1, n - 1), L, fb.box.nodes_per_axis());
  const std::size_t nt = n == 1 ? 1 : transverse.size();
  const Eigen::VectorXd dir = fb.frame.basis.col(0);
  AnalyticField::Line line;
  double sum = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    double z[3] = {0, 0, 0}, w = 1.0;
    if (n > 1) transverse.node(k, z, &w);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (int j = 1; j < n; ++j) y[j] = z[j - 1];
    const Eigen::VectorXd x0 = fb.frame.center + fb.frame.basis * y;
    h.restrict_to_line(x0.data(), dir.data(), line);
    sum += w * abs_power_integral(line, -L, L, fb.box.panels(), fb.box.order(), p);
  }
  return sum * fb.frame.jacobian();
}

// Box nodes mapped to x-space with weights including the frame Jacobian.
struct SampledBox {
  int dim;
  std::vector<double> x;  // size * dim
  std::vector<double> w;
  std::size_t size() const { return w.size(); }
};

SampledBox sample_box(const AnalyticField& f, const QuadratureSettings& s) {
  const FrameBox fb = frame_box(f, s);
  const int n = f.dimension();
  SampledBox out{n, {}, {}};
  out.x.resize(fb.box.size() * n);
  out.w.resize(fb.box.size());
  const double jac = fb.frame.jacobian();
  for (std::size_t k = 0; k < fb.box.size(); ++k) {
    double y[3], w;
    fb.box.node(k, y, &w);
    for (int i = 0; i < n; ++i) {
      double v = fb.frame.center[i];
      for (int j = 0; j < n; ++j) v += fb.frame.basis(i, j) * y[j];
      out.x[k * n + i] = v;
    }
    out.w[k] = w * jac;
  }
  return out;
}

double lp_power(const AnalyticField& f, double p, const QuadratureSettings& s) {
  if (f.is_zero()) return 0.0;
  if (!even_power(p)) {
    const double v = line_power_integral(f, frame_box(f, s), p);
    if (!std::isfinite(v)) throw NumericalError("lp_norm: non-finite value");
    return v;
  }
  const SampledBox sb = sample_box(f, s);
  double sum = 0.0;
  for (std::size_t k = 0; k < sb.size(); ++k) {
    const double v = f(&sb.x[k * sb.dim]);
    if (!std::isfinite(v)) throw NumericalError("lp_norm: non-finite sample");
    sum += sb.w[k] * pow_p(v, p);
  }
  return sum;
}

// Orthonormal basis whose first column is e.
Eigen::MatrixXd completion(const Eigen::VectorXd& e) {
  const int n = static_cast<int>(e.size());
  Eigen::MatrixXd R(n, n);
  R.col(0) = e;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(R.leftCols(1));
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  if (Q.col(0).dot(e) < 0) Q.col(0) *= -1.0;
  Q.col(0) = e;
  return Q;
}

// Everything about the fractional line integrals that does not depend on ξ.
struct FractionalContext {
  IntegrationFrame frame;
  Eigen::MatrixXd frame_inv;
  double L = 8.0;
  int base_panels = 1;
  int order = 8;
  BoxQuadrature transverse;
  double norm_pp = 0.0;  // ‖f‖_p^p

  FractionalContext(const AnalyticField& f, double p, const QuadratureSettings& s)
      : frame(f.integration_frame(s.box_halfwidth)),
        transverse(std::max(1, f.dimension() - 1), frame.half_width, adapted_box_nodes(f, frame, s.box_nodes)) {
    frame_inv = frame.basis.inverse();
    L = frame.half_width;
    BoxQuadrature axis(1, L, transverse.nodes_per_axis());
    base_panels = axis.panels();
    order = axis.order();
    norm_pp = lp_power(f, p, s);
  }
};

DirectionalEnergy fractional_energy(const AnalyticField& f, double s, double p, int m,
                                    const Eigen::VectorXd& xi, const QuadratureBundle& quads,
                                    const FractionalContext& ctx) {
  DirectionalEnergy out;
  if (f.is_zero()) return out;
  const int n = f.dimension();
  const Eigen::VectorXd v = ctx.frame_inv * xi;
  const double vn = v.norm();
  const Eigen::MatrixXd R = completion(v / vn);
  const Eigen::VectorXd dir = xi / vn;
  const double L = ctx.L;

  // one restricted line per transverse node, shared by every t
  const std::size_t nt = n == 1 ? 1 : ctx.transverse.size();
  std::vector<AnalyticField::Line> lines(nt);
  std::vector<double> tw(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    double z[3] = {0, 0, 0}, w = 1.0;
    if (n > 1) ctx.transverse.node(k, z, &w);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (int j = 1; j < n; ++j) y += z[j - 1] * R.col(j);
    const Eigen::VectorXd x0 = ctx.frame.center + ctx.frame.basis * y;
    f.restrict_to_line(x0.data(), dir.data(), lines[k]);
    tw[k] = w * ctx.frame.jacobian();
  }

  const std::vector<double> coef = difference_coefficients(m);
  auto g = [&](double t) {
    const double shift = t * vn;
    const double len = 2.0 * L + m * shift;
    const int panels = static_cast<int>(std::ceil(ctx.base_panels * len / (2.0 * L) - 1e-9));
    double sum = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const AnalyticField::Line& line = lines[k];
      auto diff = [&](double z) {
        double d = 0.0;
        for (int l = 0; l <= m; ++l) d += coef[l] * line(z + l * shift);
        return d;
      };
      sum += tw[k] * abs_power_integral(diff, -L - m * shift, L, panels, ctx.order, p);
    }
    return sum;
  };

  RadialQuadrature rq = quads.radial();
  rq.t_min = std::max(rq.t_min, std::pow(kMinDifferenceScale, 1.0 / m) / vn);
  const double t_sep = 2.0 * L / vn;
  std::optional<double> tail_level;
  if (t_sep < rq.t_max) {
    rq.t_max = t_sep;
    double level = 0.0;
    for (int l = 0; l <= m; ++l) level += std::pow(binomial(m, l), p);
    tail_level = level * ctx.norm_pp;
  }
  if (rq.t_min >= rq.t_max) rq.t_min = 1e-3 * rq.t_max;
  const RadialIntegral r = integrate_radial(g, s, p, m, rq, tail_level);
  out.value = r.value;
  out.tail_width = tail_level ? 0.0 : r.tail_width;
  return out;
}

// ∂^α f values at the frame box nodes, node-major.
struct SampledPartials {
  OrderPartials parts;
  SampledBox box;
  std::vector<double> values;
};

SampledPartials sample_partials(const AnalyticField& f, int s, const QuadratureSettings& settings) {
  SampledPartials sp{partials_of_order(f, s), sample_box(f, settings), {}};
  const std::size_t na = sp.parts.fields.size();
  sp.values.resize(sp.box.size() * na);
  parallel_for(sp.box.size(), [&](std::size_t k) {
    for (std::size_t a = 0; a < na; ++a) sp.values[k * na + a] = sp.parts.fields[a](&sp.box.x[k * sp.box.dim]);
  });
  for (double v : sp.values)
    if (!std::isfinite(v)) throw NumericalError("non-finite derivative sample");
  return sp;
}

double integer_energy(const SampledPartials& sp, const double* xi, double p) {
  const std::size_t na = sp.parts.fields.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < sp.box.size(); ++k)
    sum += sp.box.w[k] * pow_p(sp.parts.diagonal(xi, &sp.values[k * na]), p);
  return sum;
}

// Fills values for every sphere node, computing one of each antipodal pair.
template <class Fn>
void fill_profile(DirectionalEnergyProfile& prof, bool antipodal, Fn&& energy) {
  const std::size_t n = prof.sphere.size();
  prof.values.assign(n, 0.0);
  prof.tail_interval.assign(n, 0.0);
  std::vector<std::size_t> todo;
  for (std::size_t j = 0; j < n; ++j) {
    const int a = prof.sphere.antipode[j];
    if (!antipodal || a < 0 || static_cast<std::size_t>(a) > j) todo.push_back(j);
  }
  parallel_for(todo.size(), [&](std::size_t i) {
    const std::size_t j = todo[i];
    const DirectionalEnergy e = energy(prof.sphere.nodes[j]);
    prof.values[j] = e.value;
    prof.tail_interval[j] = e.tail_width;
  });
  if (!antipodal) return;
  for (std::size_t j = 0; j < n; ++j) {
    const int a = prof.sphere.antipode[j];
    if (a >= 0 && static_cast<std::size_t>(a) < j) {
      prof.values[j] = prof.values[a];
      prof.tail_interval[j] = prof.tail_interval[a];
    }
  }
}

}  // namespace

SmoothnessParams SmoothnessParams::make(double s, double p) {
  if (!std::isfinite(s) || s <= 0.0) throw DomainError("s must be positive");
  if (!std::isfinite(p) || p < 1.0) throw DomainError("p must be >= 1");
  SmoothnessParams sp;
  sp.s = s;
  sp.p = p;
  const double r = std::round(s);
  sp.fractional = std::abs(s - r) > 1e-12;
  if (sp.fractional) {
    sp.m = static_cast<int>(std::floor(s)) + 1;
  } else {
    sp.s = r;
    sp.m = static_cast<int>(r);
  }
  sp.excluded = !sp.fractional && sp.m >= 2 && p == 1.0;
  return sp;
}

double DirectionalEnergyProfile::integral() const {
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += sphere.weights[j] * values[j];
  return s;
}

double DirectionalEnergyProfile::min_value() const {
  return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

double DirectionalEnergyProfile::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

bool DirectionalEnergyProfile::degenerate() const {
  const double mx = max_value();
  return mx <= 0.0 || min_value() < kDegenerateRatio * mx;
}

double lp_norm(const AnalyticField& f, double p, const QuadratureBundle& quads) {
  if (p < 1.0) throw DomainError("lp_norm: p must be >= 1");
  check_field_dim(f, quads);
  return std::pow(lp_power(f, p, quads.settings), 1.0 / p);
}

DirectionalEnergy difference_energy(const AnalyticField& f, double s, double p, int m,
                                    const Eigen::VectorXd& xi, const QuadratureBundle& quads) {
  check_field_dim(f, quads);
  check_unit(xi, f.dimension());
  if (m < 1 || (m - s) * p <= 0) throw DomainError("difference order must exceed s");
  const FractionalContext ctx(f, p, quads.settings);
  return fractional_energy(f, s, p, m, xi, quads, ctx);
}

DirectionalEnergy directional_energy(const AnalyticField& f, const SmoothnessParams& params,
                                     const Eigen::VectorXd& xi, const QuadratureBundle& quads) {
  check_field_dim(f, quads);
  check_unit(xi, f.dimension());
  if (params.fractional) return difference_energy(f, params.s, params.p, params.m, xi, quads);
  DirectionalEnergy out;
  out.excluded_regime = params.excluded;
  if (f.is_zero()) return out;
  const AnalyticField d = directional_derivative(f, xi, params.m);
  double sum = 0.0;
  if (even_power(params.p)) {
    const SampledBox sb = sample_box(f, quads.settings);
    for (std::size_t k = 0; k < sb.size(); ++k) sum += sb.w[k] * pow_p(d(&sb.x[k * sb.dim]), params.p);
  } else {
    sum = line_power_integral(d, frame_box(f, quads.settings), params.p);
  }
  if (!std::isfinite(sum)) throw NumericalError("directional_energy: non-finite value");
  out.value = sum;
  return out;
}

DirectionalEnergyProfile directional_profile(const AnalyticField& f, const SmoothnessParams& params,
                                             const QuadratureBundle& quads) {
  check_field_dim(f, quads);
  DirectionalEnergyProfile prof;
  prof.params = params;
  prof.sphere = quads.sphere;
  prof.excluded_regime = params.excluded;
  if (f.is_zero()) {
    prof.values.assign(prof.sphere.size(), 0.0);
    prof.tail_interval.assign(prof.sphere.size(), 0.0);
    return prof;
  }
  if (params.fractional) {
    const FractionalContext ctx(f, params.p, quads.settings);
    fill_profile(prof, quads.settings.antipodal, [&](const Eigen::VectorXd& xi) {
      return fractional_energy(f, params.s, params.p, params.m, xi, quads, ctx);
    });
  } else if (even_power(params.p)) {
    const SampledPartials sp = sample_partials(f, params.m, quads.settings);
    fill_profile(prof, quads.settings.antipodal, [&](const Eigen::VectorXd& xi) {
      return DirectionalEnergy{integer_energy(sp, xi.data(), params.p), 0.0, params.excluded};
    });
  } else {
    const FrameBox fb = frame_box(f, quads.settings);
    fill_profile(prof, quads.settings.antipodal, [&](const Eigen::VectorXd& xi) {
      const double v = line_power_integral(directional_derivative(f, xi, params.m), fb, params.p);
      if (!std::isfinite(v)) throw NumericalError("directional_profile: non-finite value");
      return DirectionalEnergy{v, 0.0, params.excluded};
    });
  }
  return prof;
}

double seminorm(const AnalyticField& f, const SmoothnessParams& params, const QuadratureBundle& quads) {
  check_field_dim(f, quads);
  if (f.is_zero()) return 0.0;
  if (params.fractional) return std::pow(directional_profile(f, params, quads).integral(), 1.0 / params.p);
  const SampledPartials sp = sample_partials(f, params.m, quads.settings);
  const std::size_t na = sp.parts.fields.size();
  std::vector<double> contrib(sp.box.size());
  parallel_for(sp.box.size(), [&](std::size_t k) {
    const double* v = &sp.values[k * na];
    double norm;
    if (params.m == 1) {
      double g2 = 0.0;
      for (std::size_t a = 0; a < na; ++a) g2 += v[a] * v[a];
      norm = std::sqrt(g2);
    } else {
      norm = maximize_diagonal(sp.parts, v, quads.sphere);
    }
    contrib[k] = sp.box.w[k] * pow_p(norm, params.p);
  });
  return std::pow(std::accumulate(contrib.begin(), contrib.end(), 0.0), 1.0 / params.p);
}

double starred_seminorm(const AnalyticField& f, int s, double p, const QuadratureBundle& quads) {
  if (s < 1) throw DomainError("starred_seminorm: s must be a positive integer");
  const SmoothnessParams params = SmoothnessParams::make(s, p);
  return std::pow(directional_profile(f, params, quads).integral(), 1.0 / p);
}

namespace {

// Axis-aligned box around the significant support, used by the 1-D pipeline.
struct AxisBox {
  Eigen::VectorXd lo, hi;
};

AxisBox axis_box(const AnalyticField& f, const QuadratureSettings& s) {
  const IntegrationFrame fr = f.integration_frame(s.box_halfwidth);
  AxisBox b{fr.center, fr.center};
  for (int k = 0; k < f.dimension(); ++k) {
    const double h = fr.half_width * fr.basis.row(k).norm();
    b.lo[k] -= h;
    b.hi[k] += h;
  }
  return b;
}

// Tensor rule over the axes other than `axis`, 2·box_nodes per axis.
std::vector<std::pair<Eigen::VectorXd, double>> transverse_nodes(const AxisBox& b, int axis, int nodes) {
  const int n = static_cast<int>(b.lo.size());
  std::vector<Rule1D> rules;
  std::vector<int> axes;
  for (int k = 0; k < n; ++k) {
    if (k == axis) continue;
    axes.push_back(k);
    rules.push_back(composite_gauss(b.lo[k], b.hi[k], std::max(1, nodes / 8), 8));
  }
  std::vector<std::pair<Eigen::VectorXd, double>> out;
  if (axes.empty()) {
    out.emplace_back(Eigen::VectorXd::Zero(n), 1.0);
    return out;
  }
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    double w = 1.0;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      x[axes[a]] = rules[a].x[idx[a]];
      w *= rules[a].w[idx[a]];
    }
    out.emplace_back(std::move(x), w);
    std::size_t a = 0;
    while (a < axes.size() && ++idx[a] == rules[a].size()) idx[a++] = 0;
    if (a == axes.size()) break;
  }
  return out;
}

// Geometric panels on [a, 1].
Rule1D graded_rule(double a, int panels, int order) {
  Rule1D out;
  const double ratio = std::pow(a, 1.0 / panels);
  double lo = a;
  for (int k = 0; k < panels; ++k) {
    const double hi = k + 1 == panels ? 1.0 : lo / ratio;
    const Rule1D r = composite_gauss(lo, hi, 1, order);
    out.x.insert(out.x.end(), r.x.begin(), r.x.end());
    out.w.insert(out.w.end(), r.w.begin(), r.w.end());
    lo = hi;
  }
  return out;
}

// 1-D W^{s,p}(R) semi-norm (to the p) of g supported in [a, b]:
// ∫_R ∫_R |Δ^m_h g(x)|^p dx dh / |h|^{sp+1}.
double slice_fractional(const std::function<double(double)>& g, double a, double b, double s, double p, int m,
                        int x_panels, const QuadratureSettings& settings) {
  const std::vector<double> coef = difference_coefficients(m);
  const double width = b - a;
  auto G = [&](double h) {
    // x-support of Δ^m_h g: union of [a - l h, b - l h], merged
    std::vector<std::pair<double, double>> iv;
    for (int l = 0; l <= m; ++l) iv.emplace_back(a - l * h, b - l * h);
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& e : iv) {
      if (!merged.empty() && e.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, e.second);
      else
        merged.push_back(e);
    }
    double sum = 0.0;
    auto diff = [&](double x) {
      double d = 0.0;
      for (int l = 0; l <= m; ++l) d += coef[l] * g(x + l * h);
      return d;
    };
    for (const auto& [lo, hi] : merged) {
      const int panels = std::max(1, static_cast<int>(std::ceil(x_panels * (hi - lo) / width - 1e-9)));
      sum += abs_power_integral(diff, lo, hi, panels, 8, p);
    }
    return sum;
  };
  const double norm_pp = abs_power_integral(g, a, b, x_panels, 8, p);
  double level = 0.0;
  for (int l = 0; l <= m; ++l) level += std::pow(binomial(m, l), p);
  level *= norm_pp;

  const int panels = std::max(4, settings.t_panels);
  const int order = settings.t_order;
  double total = 0.0;
  for (double sign : {1.0, -1.0}) {
    // |h| <= 1: h = r^a, dh/|h|^{sp+1} = a r^{-1} h^{-sp} dr, integrand a·G/h^{mp}
    const double ea = 1.0 / ((m - s) * p);
    const double h_min = std::pow(kMinDifferenceScale, 1.0 / m);
    const double r_min = std::min(0.5, std::pow(h_min, 1.0 / ea));
    auto inner = [&](double r) {
      const double h = std::pow(r, ea);
      return ea * G(sign * h) / std::pow(h, m * p);
    };
    const Rule1D ri = graded_rule(r_min, panels, order);
    for (std::size_t i = 0; i < ri.size(); ++i) total += ri.w[i] * inner(ri.x[i]);
    total += r_min * inner(r_min);
    // |h| >= 1: h = r^{-1/(sp)}, dh/|h|^{sp+1} = dr/(sp); G is constant once |h| > width
    const double r_sep = std::min(1.0, std::pow(width, -s * p));
    total += r_sep * level / (s * p);
    if (r_sep < 1.0) {
      const Rule1D ro = graded_rule(r_sep, panels, order);
      for (std::size_t i = 0; i < ro.size(); ++i) total += ro.w[i] * G(sign * std::pow(ro.x[i], -1.0 / (s * p))) / (s * p);
    }
  }
  return total;
}

}  // namespace

std::pair<double, double> slice_seminorm_crosscheck(const AnalyticField& f, const SmoothnessParams& params,
                                                    int axis, const QuadratureBundle& quads) {
  check_field_dim(f, quads);
  const int n = f.dimension();
  if (axis < 0 || axis >= n) throw DomainError("slice_seminorm_crosscheck: axis out of range");
  if (f.is_zero()) return {0.0, 0.0};
  const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, axis);
  const double lhs = (params.fractional ? 2.0 : 1.0) * directional_energy(f, params, e, quads).value;

  const AxisBox b = axis_box(f, quads.settings);
  const int nodes = 2 * quads.settings.box_nodes;
  const auto trans = transverse_nodes(b, axis, nodes);
  const int x_panels = std::max(1, nodes / 8);
  AnalyticField d = f;
  if (!params.fractional)
    for (int k = 0; k < params.m; ++k) d = d.partial(axis);
  std::vector<double> contrib(trans.size());
  parallel_for(trans.size(), [&](std::size_t k) {
    Eigen::VectorXd x = trans[k].first;
    auto g = [&](double u) {
      x[axis] = u;
      return f(x.data());
    };
    double v;
    if (params.fractional) {
      v = slice_fractional(g, b.lo[axis], b.hi[axis], params.s, params.p, params.m, x_panels, quads.settings);
    } else {
      const Rule1D r = composite_gauss(b.lo[axis], b.hi[axis], x_panels, 8);
      v = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        x[axis] = r.x[i];
        v += r.w[i] * pow_p(d(x.data()), params.p);
      }
    }
    contrib[k] = trans[k].second * v;
  });
  return {lhs, std::accumulate(contrib.begin(), contrib.end(), 0.0)};
}

SlicingBounds slicing_bounds(const AnalyticField& f, const SmoothnessParams& params,
                             const Eigen::MatrixXd& basis, const QuadratureBundle& quads) {
  check_field_dim(f, quads);
  const int n = f.dimension();
  if (basis.rows() != n || basis.cols() != n) throw DomainError("slicing_bounds: basis dimension mismatch");
  if ((basis.transpose() * basis - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("slicing_bounds: basis is not orthonormal");
  SlicingBounds out;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd u = basis.col(i).normalized();
    const double t = std::pow(directional_energy(f, params, u, quads).value, 1.0 / params.p);
    out.terms.push_back(t);
    out.sum += t;
  }
  out.value = seminorm(f, params, quads);
  return out;
}

double higher_difference_energy(const AnalyticField& f, const SmoothnessParams& params,
                                const QuadratureBundle& quads) {
  check_field_dim(f, quads);
  if (!params.fractional) throw DomainError("higher_difference_energy: s must be fractional");
  if (f.is_zero()) return 0.0;
  const int M = f.dimension() * (static_cast<int>(std::floor(params.s)) + 1);
  const FractionalContext ctx(f, params.p, quads.settings);
  DirectionalEnergyProfile prof;
  prof.params = params;
  prof.sphere = quads.sphere;
  fill_profile(prof, quads.settings.antipodal, [&](const Eigen::VectorXd& xi) {
    return fractional_energy(f, params.s, params.p, M, xi, quads, ctx);
  });
  return prof.integral();
}

double weak_quasinorm(const GridField& f, double q) {
  if (!(q > 0.0)) throw DomainError("weak_quasinorm: q must be positive");
  std::vector<double> a(f.values().size());
  std::transform(f.values().begin(), f.values().end(), a.begin(), [](double v) { return std::abs(v); });
  std::sort(a.begin(), a.end());
  const double mx = a.empty() ? 0.0 : a.back();
  if (mx <= 0.0) return 0.0;
  const double vol = f.cell_volume();
  const int levels = 200;
  const double lo = std::log(1e-6 * mx), hi = std::log(mx);
  double best = 0.0;
  for (int k = 0; k < levels; ++k) {
    const double t = std::exp(lo + (hi - lo) * k / (levels - 1));
    const auto count = static_cast<double>(a.end() - std::upper_bound(a.begin(), a.end(), t));
    best = std::max(best, t * std::pow(count * vol, 1.0 / q));
  }
  return best;
}

namespace {

// Central-difference gradient and Hessian at interior nodes (one node in from
// every face). Hessian stored as the upper triangle (xx, xy, xz, yy, yz, zz).
struct GridDerivatives {
  int dim = 0;
  int ncomp = 0;
  std::vector<double> values;
  double weight = 0.0;
  std::size_t count() const { return ncomp ? values.size() / ncomp : 0; }
};

GridDerivatives grid_derivatives(const GridField& f, int s) {
  if (s != 1 && s != 2) throw DomainError("grid pipeline supports s in {1, 2}");
  const int n = f.dimension();
  GridDerivatives out;
  out.dim = n;
  out.ncomp = s == 1 ? n : n * (n + 1) / 2;
  out.weight = f.cell_volume();
  const auto& shape = f.shape();
  const auto& h = f.spacing();
  const auto& v = f.values();
  std::vector<std::size_t> stride(n, 1);
  for (int a = n - 2; a >= 0; --a) stride[a] = stride[a + 1] * shape[a + 1];
  std::vector<int> idx(n, 1);
  for (int a = 0; a < n; ++a)
    if (shape[a] < 3) return out;
  for (;;) {
    std::size_t c = 0;
    for (int a = 0; a < n; ++a) c += idx[a] * stride[a];
    if (s == 1) {
      for (int a = 0; a < n; ++a) out.values.push_back((v[c + stride[a]] - v[c - stride[a]]) / (2.0 * h[a]));
    } else {
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
          double d;
          if (a == b) {
            d = (v[c + stride[a]] - 2.0 * v[c] + v[c - stride[a]]) / (h[a] * h[a]);
          } else {
            d = (v[c + stride[a] + stride[b]] - v[c + stride[a] - stride[b]] - v[c - stride[a] + stride[b]] +
                 v[c - stride[a] - stride[b]]) /
                (4.0 * h[a] * h[b]);
          }
          out.values.push_back(d);
        }
    }
    int a = n - 1;
    while (a >= 0 && ++idx[a] == shape[a] - 1) idx[a--] = 1;
    if (a < 0) break;
  }
  return out;
}

double grid_form(const GridDerivatives& d, std::size_t k, const double* xi, int s) {
  const double* v = &d.values[k * d.ncomp];
  const int n = d.dim;
  double r = 0.0;
  if (s == 1) {
    for (int a = 0; a < n; ++a) r += v[a] * xi[a];
    return r;
  }
  int c = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b, ++c) r += (a == b ? 1.0 : 2.0) * v[c] * xi[a] * xi[b];
  return r;
}

}  // namespace

double grid_lp_norm(const GridField& f, double p) {
  if (p < 1.0) throw DomainError("grid_lp_norm: p must be >= 1");
  double s = 0.0;
  for (double v : f.values()) s += pow_p(v, p);
  return std::pow(s * f.cell_volume(), 1.0 / p);
}

DirectionalEnergyProfile grid_directional_profile(const GridField& f, int s, double p,
                                                  const SphereQuadrature& sphere) {
  if (sphere.dim != f.dimension()) throw DomainError("grid profile: sphere dimension mismatch");
  const GridDerivatives d = grid_derivatives(f, s);
  DirectionalEnergyProfile prof;
  prof.params = SmoothnessParams::make(s, p);
  prof.sphere = sphere;
  prof.excluded_regime = prof.params.excluded;
  fill_profile(prof, true, [&](const Eigen::VectorXd& xi) {
    double sum = 0.0;
    for (std::size_t k = 0; k < d.count(); ++k) sum += pow_p(grid_form(d, k, xi.data(), s), p);
    return DirectionalEnergy{sum * d.weight, 0.0, prof.params.excluded};
  });
  return prof;
}

double grid_seminorm(const GridField& f, int s, double p) {
  const GridDerivatives d = grid_derivatives(f, s);
  const int n = d.dim;
  double sum = 0.0;
  for (std::size_t k = 0; k < d.count(); ++k) {
    const double* v = &d.values[k * d.ncomp];
    double norm;
    if (s == 1) {
      double g2 = 0.0;
      for (int a = 0; a < n; ++a) g2 += v[a] * v[a];
      norm = std::sqrt(g2);
    } else {
      Eigen::MatrixXd H(n, n);
      int c = 0;
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b, ++c) H(a, b) = H(b, a) = v[c];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
      norm = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    sum += pow_p(norm, p);
  }
  return std::pow(sum * d.weight, 1.0 / p);
}

double grid_laplacian_l1(const GridField& f) {
  const GridDerivatives d = grid_derivatives(f, 2);
  const int n = d.dim;
  double sum = 0.0;
  for (std::size_t k = 0; k < d.count(); ++k) {
    const double* v = &d.values[k * d.ncomp];
    double lap = 0.0;
    int c = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b, ++c)
        if (a == b) lap += v[c];
    sum += std::abs(lap);
  }
  return sum * d.weight;
}

}  // namespace affsob
