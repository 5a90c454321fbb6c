#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affsob/family.hpp"
#include "affsob/quadrature.hpp"

namespace affsob {

enum class Relation {
  LessEq,     // lhs <= rhs + tol·|rhs|
  GreaterEq,  // lhs >= rhs - tol·|rhs|
  Less,       // lhs < rhs - tol·|rhs|
  Greater,    // lhs > rhs + tol·|rhs|
  Equal,      // |lhs - rhs| <= tol·|rhs|
  Drift,      // both finite and positive, |lhs/rhs - 1| <= tol
  Finite      // both finite and positive; tol unused
};

const char* relation_name(Relation r);

struct CheckSpec {
  std::string id;
  std::string theorem;  // tag of the statement being checked
  Relation relation = Relation::Equal;
  double tolerance = 1e-6;
};

struct CheckResult {
  std::string suite;
  std::string id;
  std::string theorem;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = -1.0;  // < 0 when not recorded
};

// Throws DomainError unless tolerance > 0 and id is non-empty.
CheckResult evaluate_check(const std::string& suite, const CheckSpec& spec, double lhs, double rhs,
                           double seconds = -1.0);

struct PlotPoint {
  std::string series;
  double x = 0.0;
  double y = 0.0;
};

struct VerificationReport {
  std::string suite;
  std::vector<CheckResult> checks;
  std::vector<PlotPoint> plots;

  // All checks pass and there is at least one.
  bool passed() const;
  std::size_t failures() const;
  const CheckResult* find(const std::string& id) const;
  void append(const VerificationReport& other);
  // One-line "suite: n/m checks passed".
  std::string summary() const;

  // `suite,check_id,theorem,lhs,rhs,ratio,tolerance,pass,seconds`; seconds is
  // "NA" unless with_timings. Numbers use %.17g, so parsing round-trips.
  std::string to_csv(bool with_timings = false) const;
  std::string plots_csv() const;
  // Throws ConfigError on malformed input. Duplicate ids are rejected.
  static VerificationReport from_csv(const std::string& text);
};

struct SuiteOptions {
  QuadratureSettings quadrature;
  std::uint64_t seed = 2024;
  StandardFamily family = standard_family();
};

VerificationReport suite_core_identities(const SuiteOptions& opts = {});
VerificationReport suite_inequalities(const SuiteOptions& opts = {});
VerificationReport suite_optimizer(const SuiteOptions& opts = {});
VerificationReport suite_no_improvement(const SuiteOptions& opts = {});

// "core", "inequalities", "optimizer", "noimpro".
const std::vector<std::string>& suite_names();
// A name from suite_names() or "all" (every suite, in that order). Throws ConfigError otherwise.
VerificationReport run_suite(const std::string& name, const SuiteOptions& opts = {});

}  // namespace affsob
