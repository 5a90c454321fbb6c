#include "affsob/constants.hpp"

#include <cmath>
#include <limits>

#include "affsob/errors.hpp"

namespace affsob {

SupResult maximize_log(const std::function<double(double)>& g, double lo, double span, int scan) {
  if (!(lo > 0) || !(span > 1) || scan < 3) throw DomainError("maximize_log: invalid bracket");
  const double a = std::log(lo), b = a + std::log(span);
  const double h = (b - a) / scan;
  // nodes at a + k h, k = 1..scan; the open end λ = lo is never evaluated
  int best = 1;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= scan; ++k) {
    const double v = g(std::exp(a + k * h));
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  const double edge = std::log1p(1e-9);
  double l = best == 1 ? a + edge : a + (best - 1) * h;
  double r = a + std::min(best + 1, scan) * h;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = r - phi * (r - l), d = l + phi * (r - l);
  double fc = g(std::exp(c)), fd = g(std::exp(d));
  while (r - l > 1e-12) {
    if (fc >= fd) {
      r = d;
      d = c;
      fd = fc;
      c = r - phi * (r - l);
      fc = g(std::exp(c));
    } else {
      l = c;
      c = d;
      fc = fd;
      d = l + phi * (r - l);
      fd = g(std::exp(d));
    }
  }
  SupResult out;
  const double u = fc >= fd ? c : d;
  out.value = std::max(fc, fd);
  out.argmax = std::exp(u);
  if (best_v > out.value) {
    out.value = best_v;
    out.argmax = std::exp(a + best * h);
  }
  return out;
}

SupResult c1_first_approach(int N) {
  if (N < 2) throw DomainError("c1_first_approach: N must be >= 2");
  const double e = 1.0 / (N - 1);
  auto g = [N, e](double lam) {
    const double mu = std::pow(lam, -e);
    return (1.0 / N - mu) / (lam - mu);
  };
  return maximize_log(g, std::pow(static_cast<double>(N), N - 1));
}

double c1_second_approach(double p, int N) {
  if (p < 1.0) throw DomainError("c1_second_approach: p must be >= 1");
  if (N < 1) throw DomainError("c1_second_approach: N must be >= 1");
  return p >= 2.0 ? std::sqrt(1.0 / N) : std::pow(static_cast<double>(N), -1.0 / p);
}

GeneralConstant c1_general(double s, double p, int N, double K1, double K2) {
  if (!(s > 0) || p < 1.0 || N < 2) throw DomainError("c1_general: invalid (s, p, N)");
  if (!(K1 > 0) || K1 > K2) throw DomainError("c1_general: need 0 < K1 <= K2");
  const double e = s / (N - 1);
  auto g = [=](double lam) {
    const double mu = std::pow(lam, -e);
    return (K1 - K2 * mu) / (K2 * K2 * (std::pow(lam, s) - mu));
  };
  const SupResult r = maximize_log(g, std::pow(K2 / K1, (N - 1) / s));
  return {r.value, r.argmax, K2};
}

SupResult c_gamma(double gamma, int N) {
  if (!(gamma >= 1.0)) throw DomainError("c_gamma: gamma must be >= 1");
  if (N < 2) throw DomainError("c_gamma: N must be >= 2");
  const double e = 2.0 / (N - 1);
  auto g = [=](double lam) {
    const double mu = std::pow(lam, -e);
    return (1.0 - gamma * mu) / (gamma * (lam * lam + mu));
  };
  return maximize_log(g, std::pow(gamma, (N - 1) / 2.0));
}

SlicingEstimate estimate_slicing_constants(const std::vector<AnalyticField>& family, const SmoothnessParams& params,
                                           const std::vector<Eigen::MatrixXd>& frames, const QuadratureBundle& quads) {
  SlicingEstimate est;
  est.K1 = std::numeric_limits<double>::infinity();
  for (const auto& f : family) {
    for (const auto& U : frames) {
      const SlicingBounds b = slicing_bounds(f, params, U, quads);
      if (b.sum <= 0.0 || b.value <= 0.0) {
        ++est.excluded;
        continue;
      }
      const double ratio = b.value / b.sum;
      est.K1 = std::min(est.K1, ratio);
      est.K2 = std::max(est.K2, ratio);
      ++est.samples;
    }
  }
  if (est.samples == 0) throw DomainError("estimate_slicing_constants: every member is degenerate");
  return est;
}

}  // namespace affsob
