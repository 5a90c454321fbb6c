#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "affsob/fields.hpp"
#include "affsob/quadrature.hpp"
#include "affsob/seminorms.hpp"
#include "affsob/sl_opt.hpp"

namespace affsob {

struct FieldSpec {
  std::optional<AnalyticField> analytic;
  std::optional<GridField> grid;
  bool empty() const { return !analytic && !grid; }
  bool is_grid() const { return grid.has_value(); }
};

struct ExperimentConfig {
  int dimension = 2;
  double s = 1.0;
  double p = 2.0;
  FieldSpec field;
  QuadratureSettings quadrature;
  OptimizerOptions optimizer;
  std::uint64_t seed = 2024;

  SmoothnessParams params() const { return SmoothnessParams::make(s, p); }
};

// {"dimension", "s", "p", "field", "quadrature", "optimizer", "seed"}; every key
// is optional (commands that need a field check for it). Relative grid paths resolve against base_dir.
// Throws ConfigError.
ExperimentConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

// {"type": "gaussian_mix", "terms": [...]} as a standalone document.
AnalyticField parse_analytic_field(const std::string& json_text);

}  // namespace affsob
