#include "affsob/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "affsob/errors.hpp"
#include "json_io.hpp"

namespace affsob {
namespace detail {

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(what + ": invalid JSON (" + e.what() + ")");
  }
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ConfigError(what + ": expected a non-empty matrix");
  const int rows = static_cast<int>(j.size());
  const int cols = j[0].is_array() ? static_cast<int>(j[0].size()) : 0;
  if (cols == 0) throw ConfigError(what + ": expected a non-empty matrix");
  Eigen::MatrixXd M(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      throw ConfigError(what + ": ragged matrix");
    for (int c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ConfigError(what + ": non-numeric entry");
      M(r, c) = j[r][c].get<double>();
    }
  }
  return M;
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array");
  Eigen::VectorXd v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + ": non-numeric entry");
    v(static_cast<int>(i)) = j[i].get<double>();
  }
  return v;
}

AnalyticField analytic_from_json(const Json& j, int expected_dim) {
  if (!j.is_object()) throw ConfigError("field: expected an object");
  if (j.value("type", std::string()) != "gaussian_mix")
    throw ConfigError("field: type must be \"gaussian_mix\" here");
  if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
    throw ConfigError("field: \"terms\" must be a non-empty array");
  int dim = expected_dim;
  std::vector<GaussianTerm> terms;
  for (const auto& t : j["terms"]) {
    if (!t.contains("precision")) throw ConfigError("field term: missing \"precision\"");
    GaussianTerm term;
    term.precision = matrix_from_json(t["precision"], "field term precision");
    const int n = static_cast<int>(term.precision.rows());
    if (term.precision.cols() != n) throw ConfigError("field term precision: not square");
    if (dim == 0) dim = n;
    if (n != dim) throw ConfigError("field term: dimension " + std::to_string(n) + " != " + std::to_string(dim));
    term.coefficient = t.value("coef", 1.0);
    term.mean = t.contains("mean") ? vector_from_json(t["mean"], "field term mean") : Eigen::VectorXd::Zero(n);
    if (term.mean.size() != n) throw ConfigError("field term mean: wrong length");
    if (t.contains("poly")) {
      Polynomial q;
      for (const auto& mono : t["poly"]) {
        if (!mono.contains("exp") || !mono["exp"].is_array() || static_cast<int>(mono["exp"].size()) != n)
          throw ConfigError("field term poly: each monomial needs \"exp\" of length " + std::to_string(n));
        Exponent e{0, 0, 0};
        for (int a = 0; a < n; ++a) {
          const int k = mono["exp"][a].get<int>();
          if (k < 0) throw ConfigError("field term poly: negative exponent");
          e[a] = k;
        }
        q.add_term(e, mono.value("coef", 1.0));
      }
      term.polynomial = q;
    }
    terms.push_back(std::move(term));
  }
  if (dim < 2 || dim > kMaxDim) throw ConfigError("field: dimension must be 2 or 3");
  try {
    AnalyticField f(dim, std::move(terms));
    f.validate();
    return f;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("field: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

namespace {

using detail::Json;

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(what + ": unknown key \"" + it.key() + "\"");
}

template <class T>
T get_number(const Json& j, const char* key, T fallback, const std::string& what) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(what + "." + key + ": expected a number");
  return j[key].get<T>();
}

QuadratureSettings parse_quadrature(const Json& j) {
  const std::string w = "quadrature";
  if (!j.is_object()) throw ConfigError(w + ": expected an object");
  reject_unknown(j, {"box_halfwidth", "box_nodes", "sphere_nodes", "t_min", "t_max", "t_panels", "t_order", "antipodal"}, w);
  QuadratureSettings q;
  q.box_halfwidth = get_number(j, "box_halfwidth", q.box_halfwidth, w);
  q.box_nodes = get_number(j, "box_nodes", q.box_nodes, w);
  q.sphere_nodes = get_number(j, "sphere_nodes", q.sphere_nodes, w);
  q.t_min = get_number(j, "t_min", q.t_min, w);
  q.t_max = get_number(j, "t_max", q.t_max, w);
  q.t_panels = get_number(j, "t_panels", q.t_panels, w);
  q.t_order = get_number(j, "t_order", q.t_order, w);
  if (j.contains("antipodal")) {
    if (!j["antipodal"].is_boolean()) throw ConfigError(w + ".antipodal: expected a boolean");
    q.antipodal = j["antipodal"].get<bool>();
  }
  if (!(q.box_halfwidth > 0) || q.box_nodes < 4 || q.sphere_nodes < 8 || !(q.t_min > 0) ||
      !(q.t_max > q.t_min) || q.t_panels < 1 || q.t_order < 1)
    throw ConfigError(w + ": resolutions must be positive (box_nodes >= 4, sphere_nodes >= 8, 0 < t_min < t_max)");
  return q;
}

OptimizerOptions parse_optimizer(const Json& j) {
  const std::string w = "optimizer";
  if (!j.is_object()) throw ConfigError(w + ": expected an object");
  reject_unknown(j, {"max_iters", "grad_tol", "initial_step", "backtrack", "max_backtracks", "restarts", "fd_epsilon", "seed"}, w);
  OptimizerOptions o;
  o.max_iters = get_number(j, "max_iters", o.max_iters, w);
  o.grad_tol = get_number(j, "grad_tol", o.grad_tol, w);
  o.initial_step = get_number(j, "initial_step", o.initial_step, w);
  o.backtrack = get_number(j, "backtrack", o.backtrack, w);
  o.max_backtracks = get_number(j, "max_backtracks", o.max_backtracks, w);
  o.restarts = get_number(j, "restarts", o.restarts, w);
  o.fd_epsilon = get_number(j, "fd_epsilon", o.fd_epsilon, w);
  o.seed = get_number<std::uint64_t>(j, "seed", o.seed, w);
  o.validate();
  return o;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::string& base_dir) {
  const Json j = detail::parse_json(json_text, "config");
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(j, {"dimension", "s", "p", "field", "quadrature", "optimizer", "seed"}, "config");

  ExperimentConfig cfg;
  cfg.dimension = get_number(j, "dimension", cfg.dimension, "config");
  cfg.s = get_number(j, "s", cfg.s, "config");
  cfg.p = get_number(j, "p", cfg.p, "config");
  cfg.seed = get_number<std::uint64_t>(j, "seed", cfg.seed, "config");
  if (cfg.dimension < 2 || cfg.dimension > kMaxDim) throw ConfigError("config.dimension: must be 2 or 3");
  if (!(cfg.s > 0) || !std::isfinite(cfg.s)) throw ConfigError("config.s: must be positive");
  if (!(cfg.p >= 1) || !std::isfinite(cfg.p)) throw ConfigError("config.p: must be >= 1");
  if (j.contains("quadrature")) cfg.quadrature = parse_quadrature(j["quadrature"]);
  if (j.contains("optimizer")) cfg.optimizer = parse_optimizer(j["optimizer"]);

  if (!j.contains("field")) return cfg;
  const Json& fj = j["field"];
  const std::string type = fj.is_object() ? fj.value("type", std::string()) : std::string();
  if (type == "gaussian_mix") {
    cfg.field.analytic = detail::analytic_from_json(fj, cfg.dimension);
  } else if (type == "grid") {
    if (!fj.contains("path") || !fj["path"].is_string()) throw ConfigError("field: grid needs a \"path\"");
    std::filesystem::path path = fj["path"].get<std::string>();
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    if (!std::filesystem::exists(path)) throw ConfigError("grid file not found: " + path.string());
    GridField g = GridField::load(path.string());
    if (fj.contains("spacing")) {
      const double h = get_number(fj, "spacing", 0.0, "field");
      if (!(h > 0)) throw ConfigError("field.spacing: must be positive");
      g = GridField(g.shape(), std::vector<double>(g.shape().size(), h), g.values(), g.support_radius());
    }
    if (g.dimension() != cfg.dimension) throw ConfigError("field: grid dimension does not match config.dimension");
    const double r = std::round(cfg.s);
    if (std::abs(cfg.s - r) > 1e-12 || r < 1 || r > 2)
      throw ConfigError("config.s: grid fields support s = 1 or s = 2 only");
    cfg.field.grid = std::move(g);
  } else {
    throw ConfigError("field.type: expected \"gaussian_mix\" or \"grid\"");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path);
  const std::string base = std::filesystem::path(path).parent_path().string();
  return parse_config(detail::read_text_file(path), base.empty() ? "." : base);
}

AnalyticField parse_analytic_field(const std::string& json_text) {
  return detail::analytic_from_json(detail::parse_json(json_text, "field"), 0);
}

}  // namespace affsob
