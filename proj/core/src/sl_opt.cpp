#include "affsob/sl_opt.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "affsob/errors.hpp"
#include "affsob/parallel.hpp"
#include "affsob/seminorms.hpp"

namespace affsob {

UnimodularTransform::UnimodularTransform(int N) : T_(Eigen::MatrixXd::Identity(N, N)) {}

UnimodularTransform::UnimodularTransform(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols() || M.rows() < 1) throw DomainError("UnimodularTransform: matrix must be square");
  if (!M.allFinite()) throw DomainError("UnimodularTransform: non-finite entries");
  const double det = M.determinant();
  if (!(det > 0.0)) throw DomainError("UnimodularTransform: determinant must be positive");
  T_ = M / std::pow(det, 1.0 / static_cast<double>(M.rows()));
}

UnimodularTransform UnimodularTransform::retract(const Eigen::MatrixXd& B, double tau) const {
  const Eigen::MatrixXd step = (tau * B).exp();
  return UnimodularTransform(Eigen::MatrixXd(T_ * step));
}

std::vector<Eigen::MatrixXd> sl_basis(int N) {
  std::vector<Eigen::MatrixXd> basis;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) {
        Eigen::MatrixXd E = Eigen::MatrixXd::Zero(N, N);
        E(i, j) = 1.0;
        basis.push_back(E);
      }
  // Gram–Schmidt on E_ii - E_{i+1,i+1}
  std::vector<Eigen::MatrixXd> diag;
  for (int i = 0; i + 1 < N; ++i) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
    D(i, i) = 1.0;
    D(i + 1, i + 1) = -1.0;
    for (const auto& Q : diag) D -= (D.cwiseProduct(Q).sum()) * Q;
    D /= D.norm();
    diag.push_back(D);
  }
  basis.insert(basis.end(), diag.begin(), diag.end());
  return basis;
}

void OptimizerOptions::validate() const {
  if (max_iters <= 0 || max_backtracks <= 0) throw ConfigError("optimizer: iteration limits must be positive");
  if (!(grad_tol > 0) || !(initial_step > 0) || !(fd_epsilon > 0))
    throw ConfigError("optimizer: grad_tol, initial_step and fd_epsilon must be positive");
  if (!(backtrack > 0 && backtrack < 1)) throw ConfigError("optimizer: backtrack factor must lie in (0, 1)");
  if (restarts < 0) throw ConfigError("optimizer: restarts must be >= 0");
}

namespace {

std::uint64_t fnv_hash(const Eigen::MatrixXd& M) {
  std::uint64_t h = 1469598103934665603ull;
  for (Eigen::Index k = 0; k < M.size(); ++k) {
    unsigned char bytes[sizeof(double)];
    const double v = M.data()[k];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
  return h;
}

Eigen::MatrixXd trace_free(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  return M - (M.trace() / n) * Eigen::MatrixXd::Identity(n, n);
}

// S = ∫ 1_{∇g≠0} |∇g|^{p-2} ∇g ∇gᵀ and ∫ |∇g|^p for g = f∘T.
struct GradientMoments {
  Eigen::MatrixXd S;
  double total = 0.0;
};

GradientMoments gradient_moments(const AnalyticField& f, const UnimodularTransform& T, double p,
                                 const QuadratureBundle& quads) {
  const int n = f.dimension();
  const AnalyticField g = affine_compose(f, T.matrix());
  std::vector<AnalyticField> grad;
  for (int i = 0; i < n; ++i) grad.push_back(g.partial(i));
  const IntegrationFrame fr = g.integration_frame(quads.settings.box_halfwidth);
  const BoxQuadrature box(n, fr.half_width, adapted_box_nodes(g, fr, quads.settings.box_nodes));
  const double jac = fr.jacobian();
  const std::size_t nn = box.size();
  std::vector<double> part(nn * (n * n + 1), 0.0);
  parallel_for(nn, [&](std::size_t k) {
    double y[3], w;
    box.node(k, y, &w);
    double x[3];
    for (int i = 0; i < n; ++i) {
      x[i] = fr.center[i];
      for (int j = 0; j < n; ++j) x[i] += fr.basis(i, j) * y[j];
    }
    double gv[3], g2 = 0.0;
    for (int i = 0; i < n; ++i) {
      gv[i] = grad[i](x);
      g2 += gv[i] * gv[i];
    }
    if (g2 == 0.0) return;
    const double gn = std::sqrt(g2);
    const double wk = w * jac;
    const double scale = wk * std::pow(gn, p - 2.0);
    double* out = &part[k * (n * n + 1)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = scale * gv[i] * gv[j];
    out[n * n] = wk * std::pow(gn, p);
  });
  GradientMoments m;
  m.S = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < nn; ++k) {
    const double* v = &part[k * (n * n + 1)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.S(i, j) += v[i * n + j];
    m.total += v[n * n];
  }
  if (!m.S.allFinite() || !std::isfinite(m.total)) throw NumericalError("gradient moments: non-finite value");
  return m;
}

struct RunResult {
  UnimodularTransform T;
  double value;
  OptimizerTrace trace;
};

RunResult descend(const AnalyticField& f, const SmoothnessParams& params, const OptimizerOptions& opts,
                  const QuadratureBundle& quads, UnimodularTransform T) {
  const bool exact = !params.fractional && params.m == 1;
  auto grad_at = [&](const UnimodularTransform& X) {
    return exact ? exact_gradient_s1(f, X, params.p, quads) : numeric_gradient(f, X, params, quads, opts.fd_epsilon);
  };
  RunResult r{T, objective(f, T, params, quads), {}};
  if (!std::isfinite(r.value)) throw NumericalError("minimize: non-finite objective");
  double tau_prev = opts.initial_step;
  for (int it = 0;; ++it) {
    const Eigen::MatrixXd G = grad_at(r.T);
    const double gn = G.norm();
    r.trace.entries.push_back({r.value, gn, 0.0, fnv_hash(r.T.matrix())});
    if (gn <= opts.grad_tol * r.value) {
      r.trace.reason = "converged";
      break;
    }
    if (it >= opts.max_iters) {
      r.trace.reason = "max_iters";
      break;
    }
    // scale-free direction: the objective is 1-homogeneous in f
    const Eigen::MatrixXd D = -G / r.value;
    const double slope = gn * gn / r.value;
    double tau = std::min(2.0 * tau_prev, opts.initial_step);
    bool accepted = false;
    for (int b = 0; b < opts.max_backtracks; ++b, tau *= opts.backtrack) {
      const UnimodularTransform cand = r.T.retract(D, tau);
      const double v = objective(f, cand, params, quads);
      if (!std::isfinite(v)) throw NumericalError("minimize: non-finite objective");
      if (v <= r.value - 1e-4 * tau * slope) {
        r.T = cand;
        r.value = v;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      r.trace.reason = "no_descent";
      r.trace.stalled = true;
      break;
    }
    r.trace.entries.back().step = tau;
    tau_prev = tau;
  }
  return r;
}

}  // namespace

double objective(const AnalyticField& f, const UnimodularTransform& T, const SmoothnessParams& params,
                 const QuadratureBundle& quads) {
  if (T.dim() != f.dimension()) throw DomainError("objective: dimension mismatch");
  return seminorm(affine_compose(f, T.matrix()), params, quads);
}

Eigen::MatrixXd exact_gradient_s1(const AnalyticField& f, const UnimodularTransform& T, double p,
                                  const QuadratureBundle& quads) {
  if (T.dim() != f.dimension()) throw DomainError("exact_gradient_s1: dimension mismatch");
  if (p < 1.0) throw DomainError("exact_gradient_s1: p must be >= 1");
  const GradientMoments m = gradient_moments(f, T, p, quads);
  const int n = f.dimension();
  if (m.total <= 0.0) return Eigen::MatrixXd::Zero(n, n);
  // d/dε ‖∇(g∘e^{εB})‖_p = F^{1-p} ⟨S, B⟩
  return trace_free(m.S) / std::pow(m.total, (p - 1.0) / p);
}

Eigen::MatrixXd numeric_gradient(const AnalyticField& f, const UnimodularTransform& T, const SmoothnessParams& params,
                                 const QuadratureBundle& quads, double fd_epsilon) {
  if (!(fd_epsilon > 0)) throw DomainError("numeric_gradient: fd_epsilon must be positive");
  const int n = f.dimension();
  const auto basis = sl_basis(n);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (const auto& B : basis) {
    const double fp = objective(f, T.retract(B, fd_epsilon), params, quads);
    const double fm = objective(f, T.retract(B, -fd_epsilon), params, quads);
    if (!std::isfinite(fp) || !std::isfinite(fm)) throw NumericalError("numeric_gradient: non-finite objective");
    G += ((fp - fm) / (2.0 * fd_epsilon)) * B;
  }
  return G;
}

MinimizeResult minimize(const AnalyticField& f, const SmoothnessParams& params, const OptimizerOptions& opts,
                        const QuadratureBundle& quads) {
  opts.validate();
  const int n = f.dimension();
  if (seminorm(f, params, quads) <= 0.0) throw DomainError("minimize: field has zero semi-norm");
  RunResult best = descend(f, params, opts, quads, UnimodularTransform(n));
  for (int k = 0; k < opts.restarts; ++k) {
    const Eigen::MatrixXd start = random_unimodular(n, 4.0, opts.seed + 7919ull * (k + 1));
    RunResult r = descend(f, params, opts, quads, UnimodularTransform(start));
    if (r.value < best.value) best = std::move(r);
  }
  return {best.T, best.value, std::move(best.trace)};
}

CriticalResiduals critical_residuals(const AnalyticField& f, const UnimodularTransform& T, double p,
                                     const QuadratureBundle& quads) {
  const GradientMoments m = gradient_moments(f, T, p, quads);
  CriticalResiduals r;
  if (m.total <= 0.0) return r;
  const int n = f.dimension();
  for (const auto& M : sl_basis(n)) r.general = std::max(r.general, std::abs(M.cwiseProduct(m.S).sum()) / m.total);
  r.diag = std::abs(m.total / n - m.S(0, 0)) / m.total;
  return r;
}

Eigen::MatrixXd descent_matrix(const Eigen::VectorXd& xi, double lambda) {
  const int n = static_cast<int>(xi.size());
  if (n < 2) throw DomainError("descent_step: dimension must be >= 2");
  if (!(lambda > 1.0)) throw DomainError("descent_step: lambda must exceed 1");
  if (std::abs(xi.norm() - 1.0) > 1e-12) throw DomainError("descent_step: direction must be a unit vector");
  // O with rows (ξ, completion): Oξ = e₁
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  A.col(0) = xi;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ();
  if (Q.col(0).dot(xi) < 0) Q.col(0) *= -1.0;
  const Eigen::MatrixXd O = Q.transpose();
  const double mu = std::pow(lambda, -1.0 / (n - 1));
  Eigen::VectorXd d = Eigen::VectorXd::Constant(n, mu);
  d[0] = lambda;
  return O.transpose() * d.asDiagonal() * O;
}

DescentStep descent_step(const AnalyticField& f, const SmoothnessParams& params, const Eigen::VectorXd& xi,
                         double lambda, const QuadratureBundle& quads) {
  DescentStep st;
  st.T = descent_matrix(xi, lambda);
  st.old_value = seminorm(f, params, quads);
  st.new_value = objective(f, UnimodularTransform(st.T), params, quads);
  return st;
}

DirectionalBoundReport directional_lower_bound_check(const AnalyticField& f, const UnimodularTransform& T,
                                                     const SmoothnessParams& params, const QuadratureBundle& quads,
                                                     double threshold) {
  const AnalyticField g = affine_compose(f, T.matrix());
  const DirectionalEnergyProfile prof = directional_profile(g, params, quads);
  const double norm = seminorm(g, params, quads);
  DirectionalBoundReport r;
  r.threshold = threshold;
  if (norm <= 0.0) return r;
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < prof.values.size(); ++j) {
    const double ratio = std::pow(prof.values[j], 1.0 / params.p) / norm;
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.weakest = prof.sphere.nodes[j];
    }
    r.max_ratio = std::max(r.max_ratio, ratio);
  }
  r.pass = threshold > 0.0 ? r.min_ratio >= threshold : r.min_ratio > 0.0;
  return r;
}

Eigen::MatrixXd polar_align(const Eigen::MatrixXd& T) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T * T.transpose());
  return es.operatorSqrt();
}

Eigen::MatrixXd random_unimodular(int N, double max_condition, std::uint64_t seed) {
  if (N < 1 || !(max_condition >= 1.0)) throw DomainError("random_unimodular: invalid arguments");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::MatrixXd G(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) G(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  if (Q.determinant() < 0) Q.col(0) *= -1.0;
  const double kappa = std::exp(uniform(rng) * std::log(max_condition));
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) U(i, j) = normal(rng);
  if (U.norm() == 0.0 || kappa <= 1.0) return Q;
  U /= U.norm();
  auto cond = [&](double t) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd::Identity(N, N) + t * U);
    const auto& sv = svd.singularValues();
    return sv[0] / sv[N - 1];
  };
  double lo = 0.0, hi = 1.0;
  while (cond(hi) < kappa) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cond(mid) < kappa ? lo : hi) = mid;
  }
  return Q * (Eigen::MatrixXd::Identity(N, N) + lo * U);
}

}  // namespace affsob
