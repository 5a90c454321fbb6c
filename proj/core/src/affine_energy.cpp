#include "affsob/affine_energy.hpp"

#include <cmath>
#include <limits>

#include "affsob/errors.hpp"
#include "affsob/quadrature.hpp"

namespace affsob {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Trigonometric interpolant of equispaced samples v (v[j] at 2πj/n + offset),
// evaluated at M equispaced points with the same offset.
std::vector<double> trig_upsample(const std::vector<double>& v, int M) {
  const int n = static_cast<int>(v.size());
  const int K = n / 2;
  std::vector<double> a(K + 1, 0.0), b(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) {
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * kPi * k * j / n;
      a[k] += v[j] * std::cos(th);
      b[k] += v[j] * std::sin(th);
    }
    const double scale = (k == 0 || (n % 2 == 0 && k == K)) ? 1.0 / n : 2.0 / n;
    a[k] *= scale;
    b[k] *= scale;
  }
  if (n % 2 == 0) b[K] = 0.0;
  std::vector<double> out(M);
  for (int i = 0; i < M; ++i) {
    const double th = 2.0 * kPi * i / M;
    const double c1 = std::cos(th), s1 = std::sin(th);
    double c = 1.0, s = 0.0, sum = a[0];
    for (int k = 1; k <= K; ++k) {
      const double cn = c * c1 - s * s1;
      s = s * c1 + c * s1;
      c = cn;
      sum += a[k] * c + b[k] * s;
    }
    if (n % 2 == 0) {
      // the Nyquist term is split symmetrically, which makes it cos(Kθ)
      sum -= b[K] * s;
    }
    out[i] = sum;
  }
  return out;
}

// ∫_circle v^{-a} for equispaced v, integrating the trigonometric interpolant
// of v on a grid refined until the sum settles. Returns a negative value when
// the interpolant is not positive.
double refined_ring(const std::vector<double>& v, double a) {
  const int n = static_cast<int>(v.size());
  double prev = -1.0;
  for (int M = 8 * n; M <= (1 << 17); M *= 2) {
    const std::vector<double> fine = trig_upsample(v, M);
    double sum = 0.0;
    for (double x : fine) {
      if (!(x > 0.0)) return -1.0;
      sum += std::pow(x, -a);
    }
    sum *= 2.0 * kPi / M;
    if (prev > 0.0 && std::abs(sum - prev) <= 1e-12 * sum) return sum;
    prev = sum;
  }
  return prev;
}

double node_sum(const SphereQuadrature& sq, const std::vector<double>& values, double a) {
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) sum += sq.weights[j] * std::pow(values[j], -a);
  return sum;
}

// ∫_S D^{-a} dσ. D is far smoother than D^{-a} when the profile is strongly
// anisotropic, so along every equispaced ring of the rule D is replaced by its
// trigonometric interpolant before the power is taken.
double negative_power_integral(const SphereQuadrature& sq, const std::vector<double>& values, double a) {
  if (sq.dim == 2) {
    const double r = refined_ring(values, a);
    return r > 0.0 ? r : node_sum(sq, values, a);
  }
  if (sq.dim == 3) {
    const int nt = sq.resolution, np = 2 * sq.resolution;
    if (static_cast<int>(values.size()) != nt * np) return node_sum(sq, values, a);
    const Rule1D& g = gauss_legendre(nt);
    double sum = 0.0;
    for (int i = 0; i < nt; ++i) {
      // ring φ_k = 2π(k + 1/2)/np: a half-step shift does not change the ring integral
      std::vector<double> ring(values.begin() + i * np, values.begin() + (i + 1) * np);
      const double r = refined_ring(ring, a);
      if (r <= 0.0) return node_sum(sq, values, a);
      sum += g.w[i] * r;
    }
    return sum;
  }
  return node_sum(sq, values, a);
}

double power_energy(const DirectionalEnergyProfile& prof, const std::vector<double>& values) {
  const double s = prof.params.s, p = prof.params.p;
  const double N = prof.sphere.dim;
  const double sum = negative_power_integral(prof.sphere, values, N / (s * p));
  const double sigma = prof.sphere.total_weight();
  return std::pow(sigma, (N + s * p) / (N * p)) * std::pow(sum, -s / N);
}

}  // namespace

PsiSpec PsiSpec::identity() {
  PsiSpec ps;
  ps.psi = [](double x) { return x; };
  ps.psi_inv = [](double x) { return x; };
  return ps;
}

PsiSpec PsiSpec::power_law(double s, double p, int N) {
  if (s <= 0 || p < 1 || N < 1) throw DomainError("PsiSpec::power_law: invalid parameters");
  PsiSpec ps;
  ps.power = true;
  ps.exponent = s * p / N;
  const double a = ps.exponent;
  const double inf = std::numeric_limits<double>::infinity();
  ps.psi = [a, inf](double x) { return x == 0.0 ? inf : std::isinf(x) ? 0.0 : std::pow(x, -a); };
  ps.psi_inv = [a, inf](double y) { return y == 0.0 ? inf : std::isinf(y) ? 0.0 : std::pow(y, -1.0 / a); };
  return ps;
}

bool PsiSpec::check(double lo, double hi, int points) const {
  std::vector<double> x(points), v(points);
  for (int k = 0; k < points; ++k) {
    x[k] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (points - 1));
    const double back = psi(psi_inv(x[k]));
    if (std::abs(back - x[k]) > 1e-9 * std::max(1.0, x[k])) return false;
  }
  if (!convex) return true;
  // second differences on a uniform grid inside [lo, hi]
  const double h = (hi - lo) / (points - 1);
  for (int k = 1; k + 1 < points; ++k) {
    const double t = lo + k * h;
    const double d2 = psi(t - h) - 2.0 * psi(t) + psi(t + h);
    if (d2 < -1e-9 * std::max(1.0, std::abs(psi(t)))) return false;
  }
  return true;
}

EnergyResult affine_energy(const DirectionalEnergyProfile& prof) {
  EnergyResult r;
  if (prof.values.empty()) throw DomainError("affine_energy: empty profile");
  if (prof.degenerate()) {
    r.degenerate = true;
    return r;
  }
  r.value = power_energy(prof, prof.values);
  std::vector<double> upper = prof.values;
  for (std::size_t j = 0; j < upper.size(); ++j) upper[j] += prof.tail_interval[j];
  r.tail_budget = power_energy(prof, upper) - r.value;
  return r;
}

EnergyResult affine_energy(const AnalyticField& f, const SmoothnessParams& params, const QuadratureBundle& quads) {
  return affine_energy(directional_profile(f, params, quads));
}

EnergyResult affine_energy_monitored(const AnalyticField& f, const SmoothnessParams& params,
                                     const QuadratureBundle& quads) {
  const EnergyResult coarse = affine_energy(f, params, quads);
  QuadratureSettings fine = quads.settings;
  fine.sphere_nodes *= 2;
  EnergyResult r = affine_energy(f, params, QuadratureBundle(quads.dim(), fine));
  if (r.value > 0) r.monitor_rel_diff = std::abs(coarse.value - r.value) / r.value;
  return r;
}

EnergyResult psi_energy(const DirectionalEnergyProfile& prof, const PsiSpec& psi) {
  EnergyResult r;
  if (prof.values.empty()) throw DomainError("psi_energy: empty profile");
  const double sigma = prof.sphere.total_weight();
  if (psi.power && prof.degenerate()) {
    r.degenerate = true;
    return r;
  }
  double avg = 0.0;
  for (std::size_t j = 0; j < prof.values.size(); ++j) {
    const double u = psi.psi_inv(prof.values[j]);
    if (std::isnan(u)) throw DomainError("psi_energy: Ψ⁻¹ undefined at a directional energy");
    avg += prof.sphere.weights[j] * u;
  }
  avg /= sigma;
  const double ep = sigma * psi.psi(avg);
  if (std::isinf(ep)) {
    r.infinite = true;
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  r.value = std::pow(ep, 1.0 / prof.params.p);
  return r;
}

EnergyResult psi_energy(const AnalyticField& f, const SmoothnessParams& params, const PsiSpec& psi,
                        const QuadratureBundle& quads) {
  return psi_energy(directional_profile(f, params, quads), psi);
}

double jensen_gap(const DirectionalEnergyProfile& prof) {
  return std::pow(prof.integral(), 1.0 / prof.params.p) - affine_energy(prof).value;
}

double jensen_gap(const AnalyticField& f, const SmoothnessParams& params, const QuadratureBundle& quads) {
  return jensen_gap(directional_profile(f, params, quads));
}

}  // namespace affsob
