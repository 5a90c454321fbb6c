// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "affsob/affine_energy.hpp"
#include "affsob/constants.hpp"
#include "affsob/harness.hpp"
#include "affsob/seminorms.hpp"
#include "affsob/sl_opt.hpp"
#include "cli.hpp"
#include "oracles/frozen_oracles.hpp"

using namespace affsob;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }
bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<const CheckResult*> rows(const VerificationReport& r, const std::function<bool(const CheckResult&)>& pred) {
  std::vector<const CheckResult*> out;
  for (const auto& c : r.checks)
    if (pred(c)) out.push_back(&c);
  return out;
}

double suite_seconds(const VerificationReport& r, const std::string& suite) {
  double t = 0.0;
  for (const auto& c : r.checks)
    if (c.suite == suite && c.seconds > 0) t += c.seconds;
  return t;
}

// ---------------------------------------------------------------- direct criteria

Outcome radial_equality() {
  Outcome o;
  const QuadratureBundle q(2);
  const AnalyticField f = AnalyticField::standard_gaussian(2);
  double worst = 0.0, slowest = 0.0;
  for (auto [s, p] : {std::pair{0.5, 2.0}, {1.0, 2.0}, {1.0, 1.0}, {2.0, 2.0}}) {
    const auto t0 = Clock::now();
    const SmoothnessParams P = SmoothnessParams::make(s, p);
    const double E = affine_energy(f, P, q).value;
    const double ref = P.fractional ? seminorm(f, P, q) : starred_seminorm(f, static_cast<int>(s), p, q);
    const double dev = rel(E, ref);
    const double secs = since(t0);
    worst = std::max(worst, dev);
    slowest = std::max(slowest, secs);
    o.require(dev <= 1e-3, "(" + g(s) + "," + g(p) + ") rel dev " + g(dev));
    o.require(secs <= 60.0, "(" + g(s) + "," + g(p) + ") took " + g(secs) + " s");
  }
  o.note("max rel dev " + g(worst) + " (tol 1e-3), slowest pair " + g(slowest) + " s (limit 60)");
  return o;
}

Outcome closed_form() {
  Outcome o;
  const QuadratureBundle q(2);
  const AnalyticField f = AnalyticField::standard_gaussian(2);
  const double semi = rel(seminorm(f, SmoothnessParams::make(1, 2), q), oracle::kGaussianGradL2);
  const double l2 = rel(lp_norm(f, 2, q), oracle::kGaussianL2);
  o.require(semi <= 1e-5, "seminorm rel err " + g(semi));
  o.require(l2 <= 1e-5, "L2 rel err " + g(l2));
  o.note("seminorm rel err " + g(semi) + ", L2 rel err " + g(l2) + " (tol 1e-5)");
  return o;
}

Outcome optimizer_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  const QuadratureBundle q(2);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = 4.0;
  A(1, 1) = 1.0;
  const AnalyticField f = AnalyticField::gaussian(A);
  const MinimizeResult r = minimize(f, SmoothnessParams::make(1, 2), {}, q);
  const double target = std::sqrt(oracle::kAnisoMinObjectiveSq);
  const double vdev = rel(r.value, target);
  o.require(vdev <= 1e-3, "objective rel dev " + g(vdev));

  const Eigen::MatrixXd P = polar_align(r.T.matrix());
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
  expected(0, 0) = oracle::kAnisoMinLambda;
  expected(1, 1) = 1.0 / oracle::kAnisoMinLambda;
  const double tdev = (P - expected).cwiseAbs().maxCoeff();
  o.require(tdev <= 1e-3, "T* entrywise dev " + g(tdev));

  const CriticalResiduals cr = critical_residuals(f, r.T, 2.0, q);
  o.require(cr.general <= 1e-4 && cr.diag <= 1e-4, "critical residuals " + g(cr.general) + "/" + g(cr.diag));

  // E_{1,2}(f) = √(σ/N)·‖∇(f∘T*)‖₂
  const double E = affine_energy(f, SmoothnessParams::make(1, 2), q).value;
  const AnalyticField ft = affine_compose(f, r.T.matrix());
  const double rhs = std::sqrt(sphere_area(2) / 2.0) * seminorm(ft, SmoothnessParams::make(1, 2), q);
  const double idev = rel(E, rhs);
  o.require(idev <= 1e-3, "p=2 identity rel dev " + g(idev));

  const double secs = since(t0);
  o.require(secs <= 120.0, "runtime " + g(secs) + " s");
  o.note("value dev " + g(vdev) + ", T* dev " + g(tdev) + ", residuals " + g(std::max(cr.general, cr.diag)) +
         ", identity dev " + g(idev) + ", " + g(secs) + " s");
  return o;
}

Outcome constants() {
  Outcome o;
  const SupResult c1 = c1_first_approach(2);
  const double lam = 2.0 + std::sqrt(3.0);
  o.require(std::abs(c1.value - 0.066987) <= 1e-4, "c1_first(2) = " + g(c1.value));
  o.require(std::abs(c1.argmax - lam) <= 1e-4, "argmax = " + g(c1.argmax));
  o.require(std::abs(c1.value - oracle::kC1FirstN2Scan) <= 1e-4, "c1_first vs scan");
  const SupResult cg = c_gamma(1.0, 2);
  o.require(std::abs(cg.value - 0.207107) <= 1e-4, "c_gamma(1,2) = " + g(cg.value));
  o.require(std::abs(cg.value - oracle::kCGammaScan) <= 1e-4, "c_gamma vs scan");

  bool exact = true;
  for (int N = 2; N <= 6; ++N) {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double want = p >= 2.0 ? 1.0 / std::sqrt(static_cast<double>(N)) : std::pow(N, -1.0 / p);
      exact = exact && std::abs(c1_second_approach(p, N) - want) <= 2.0 * std::numeric_limits<double>::epsilon() * want;
    }
  }
  o.require(exact, "c1_second not exact");
  const double r2 = c1_first_approach(2).value / c1_second_approach(2, 2);
  const double r6 = c1_first_approach(6).value / c1_second_approach(2, 6);
  o.require(r6 < r2, "ratio N=6 " + g(r6) + " not below N=2 " + g(r2));
  o.note("c1_first " + g(c1.value) + " at " + g(c1.argmax) + ", c_gamma " + g(cg.value) + ", ratio N=2 " + g(r2) +
         " > N=6 " + g(r6));
  return o;
}

// ---------------------------------------------------------------- suite-derived criteria

Outcome affine_invariance(const VerificationReport& all) {
  Outcome o;
  const auto rs = rows(all, [](const CheckResult& c) {
    return starts_with(c.id, "affine-invariance/") && ends_with(c.id, "/aniso");
  });
  o.require(rs.size() == 5, std::to_string(rs.size()) + " (s,p) pairs instead of 5");
  double worst = 0.0;
  for (const auto* c : rs) {
    const double d = rel(c->lhs, c->rhs);
    worst = std::max(worst, d);
    o.require(d <= 5e-3 && c->pass, c->id + " dev " + g(d));
  }
  o.note("5 pairs x 20 T, max rel dev " + g(worst) + " (tol 5e-3)");
  return o;
}

Outcome change_of_variables(const VerificationReport& all) {
  Outcome o;
  int n = 0;
  double w2 = 0, w3 = 0;
  for (const auto* c : rows(all, [](const CheckResult& c) { return starts_with(c.id, "change-of-variables/"); })) {
    const bool two = starts_with(c->id, "change-of-variables/N2/");
    const double tol = two ? 1e-6 : 1e-3;
    const double d = rel(c->lhs, c->rhs);
    (two ? w2 : w3) = std::max(two ? w2 : w3, d);
    o.require(d <= tol && c->pass, c->id + " dev " + g(d));
    ++n;
  }
  o.require(n == 8, std::to_string(n) + " rows instead of 8");
  o.note("g = 1 + 3 others, max dev N=2 " + g(w2) + " (tol 1e-6), N=3 " + g(w3) + " (tol 1e-3)");
  return o;
}

Outcome descent(const VerificationReport& all) {
  Outcome o;
  std::set<std::string> decreased;
  int members = 0;
  for (const auto* c : rows(all, [](const CheckResult& c) { return starts_with(c.id, "descent/"); })) {
    if (ends_with(c->id, "/bound-fails-at-identity")) {
      ++members;
      o.require(c->pass, c->id);
    }
    if (ends_with(c->id, "/strict-decrease") && c->pass && c->lhs < c->rhs) decreased.insert(c->id);
  }
  o.require(members == 5, std::to_string(members) + " sheared members");
  o.require(decreased.size() == 5, std::to_string(decreased.size()) + "/5 strict decreases");
  o.note(std::to_string(decreased.size()) + "/" + std::to_string(members) + " members strictly decreased");
  return o;
}

Outcome all_rows_pass(const VerificationReport& all, const std::string& prefix, std::size_t expected_min,
                      const std::string& what) {
  Outcome o;
  const auto rs = rows(all, [&](const CheckResult& c) { return starts_with(c.id, prefix); });
  std::size_t ok = 0;
  for (const auto* c : rs) {
    if (c->pass) ++ok;
    else o.require(false, c->id);
  }
  o.require(rs.size() >= expected_min, std::to_string(rs.size()) + " rows");
  o.note(std::to_string(ok) + "/" + std::to_string(rs.size()) + " " + what);
  return o;
}

Outcome slice_crosscheck(const VerificationReport& all) {
  Outcome o;
  const auto rs = rows(all, [](const CheckResult& c) { return starts_with(c.id, "slice-crosscheck/"); });
  double worst = 0.0;
  for (const auto* c : rs) {
    const double d = rel(c->lhs, c->rhs);
    worst = std::max(worst, d);
    o.require(d <= 1e-3 && c->pass, c->id + " dev " + g(d));
  }
  o.require(rs.size() == 6, std::to_string(rs.size()) + " rows instead of 6");
  o.note("3 fields x 2 (s,p), max rel dev " + g(worst) + " (tol 1e-3)");
  return o;
}

Outcome empirical_constants(const VerificationReport& all) {
  Outcome o;
  const std::set<std::string> tags{"sobolev", "affine-embedding", "gagliardo-nirenberg", "reverse-classical",
                                   "reverse-affine", "finiteness"};
  std::size_t n = 0, ok = 0;
  double worst_drift = 0.0;
  for (const auto& c : all.checks) {
    if (c.suite != "inequalities" || !tags.count(c.theorem)) continue;
    ++n;
    if (c.pass) ++ok;
    else o.require(false, c.id);
    if (ends_with(c.id, "/constant")) worst_drift = std::max(worst_drift, rel(c.lhs, c.rhs));
  }
  const double secs = suite_seconds(all, "inequalities");
  o.require(n > 0, "no rows");
  o.require(secs <= 900.0, "inequalities suite took " + g(secs) + " s");
  o.note(std::to_string(ok) + "/" + std::to_string(n) + " rows, worst constant drift " + g(worst_drift) +
         " (tol 0.05), suite " + g(secs) + " s (limit 900)");
  return o;
}

Outcome no_improvement(const VerificationReport& all) {
  Outcome o;
  const auto rs = rows(all, [](const CheckResult& c) { return c.suite == "noimpro"; });
  for (const auto* c : rs)
    if (!c->pass) o.require(false, c->id);
  o.require(!rs.empty(), "no rows");
  const CheckResult* growth = nullptr;
  const CheckResult* control = nullptr;
  for (const auto* c : rs) {
    if (c->id.find("growth") != std::string::npos) growth = c;
    if (c->id.find("control") != std::string::npos) control = c;
  }
  o.require(growth && control, "growth/control rows missing");
  if (growth && control)
    o.note("growth " + g(growth->lhs) + " (gate " + g(growth->rhs) + "), control drift " +
           g(std::abs(control->lhs / control->rhs - 1)) + " (tol 0.2)");
  return o;
}

Outcome weak_sobolev(const VerificationReport& all) {
  Outcome o;
  const auto rs = rows(all, [](const CheckResult& c) { return c.theorem == "weak-sobolev"; });
  double secs = 0.0, worst = 0.0;
  for (const auto* c : rs) {
    secs += std::max(0.0, c->seconds);
    worst = std::max(worst, rel(c->lhs, c->rhs));
    o.require(c->pass, c->id);
  }
  o.require(!rs.empty(), "no rows");
  o.require(secs <= 300.0, "runtime " + g(secs) + " s");
  o.note("64^3 vs 96^3 max drift " + g(worst) + " (tol 0.05), " + g(secs) + " s (limit 300)");
  return o;
}

Outcome determinism(const VerificationReport& all) {
  Outcome o;
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "affsob_acceptance";
  std::filesystem::remove_all(dir);
  std::ostringstream out, err;
  const int code = cli_main({"verify", "--suite", "all", "--out", dir.string()}, out, err);
  std::ifstream in(dir / "all.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string first = all.to_csv();
  const std::string second = ss.str();
  o.require(!second.empty(), "no CSV written (exit " + std::to_string(code) + ")");
  o.require(first == second, "CSV differs between runs");
  o.note("two 'all' runs, " + std::to_string(first.size()) + " bytes, " +
         (first == second ? std::string("byte-identical") : std::string("different")));
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results;
  auto report = [&](int id, const std::string& name, const Outcome& o) {
    std::printf("[%s] criterion %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    results.emplace_back(name, o);
  };

  report(1, "radial equality", radial_equality());
  report(2, "closed-form Gaussian", closed_form());
  report(5, "optimizer oracle", optimizer_oracle());
  report(7, "constants", constants());

  const auto t0 = Clock::now();
  const VerificationReport all = run_suite("all");
  std::printf("suite run: %s in %.0f s\n", all.summary().c_str(), since(t0));

  report(3, "affine invariance", affine_invariance(all));
  report(4, "sphere change of variables", change_of_variables(all));
  report(6, "descent construction", descent(all));
  report(8, "slicing s=1", all_rows_pass(all, "slicing-s1/", 20, "slicing rows within 1e-9 slack over 5 frames"));
  report(9, "slice cross-check", slice_crosscheck(all));
  report(10, "empirical constants", empirical_constants(all));
  report(11, "non-improvability", no_improvement(all));
  report(12, "weak Sobolev", weak_sobolev(all));
  report(13, "determinism", determinism(all));

  int failed = 0;
  for (const auto& [name, o] : results) failed += o.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed ? 1 : 0;
}
