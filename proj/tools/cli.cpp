#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "affsob/affine_energy.hpp"
#include "affsob/config.hpp"
#include "affsob/constants.hpp"
#include "affsob/errors.hpp"
#include "affsob/harness.hpp"
#include "affsob/seminorms.hpp"
#include "affsob/sl_opt.hpp"

namespace affsob {
namespace {

using Json = nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16g", v);
  return buf;
}

Json matrix_json(const Eigen::MatrixXd& M) {
  Json rows = Json::array();
  for (int i = 0; i < M.rows(); ++i) {
    Json r = Json::array();
    for (int j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(r);
  }
  return rows;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void emit(const std::string& out_path, const std::string& text, std::ostream& out) {
  if (out_path.empty()) out << text;
  else write_file(out_path, text);
}

ExperimentConfig config_with_field(const std::string& path) {
  ExperimentConfig cfg = load_config(path);
  if (cfg.field.empty()) throw ConfigError("config " + path + ": missing \"field\"");
  return cfg;
}

Json profile_json(const DirectionalEnergyProfile& prof) {
  Json arr = Json::array();
  for (std::size_t j = 0; j < prof.values.size(); ++j) {
    const auto& xi = prof.sphere.nodes[j];
    arr.push_back({{"xi", std::vector<double>(xi.data(), xi.data() + xi.size())}, {"D", prof.values[j]}});
  }
  return arr;
}

int run_energy(const std::string& config, const std::string& out_path, std::ostream& out) {
  const ExperimentConfig cfg = config_with_field(config);
  const SmoothnessParams P = cfg.params();
  const QuadratureBundle q(cfg.dimension, cfg.quadrature);
  Json j;
  j["s"] = cfg.s;
  j["p"] = cfg.p;
  j["dimension"] = cfg.dimension;
  j["excluded_regime"] = P.excluded;
  DirectionalEnergyProfile prof;
  if (cfg.field.is_grid()) {
    const GridField& g = *cfg.field.grid;
    const int s = static_cast<int>(std::lround(cfg.s));
    prof = grid_directional_profile(g, s, cfg.p, q.sphere);
    j["seminorm"] = grid_seminorm(g, s, cfg.p);
    j["lp_norm"] = grid_lp_norm(g, cfg.p);
  } else {
    const AnalyticField& f = *cfg.field.analytic;
    prof = directional_profile(f, P, q);
    j["seminorm"] = seminorm(f, P, q);
    j["lp_norm"] = lp_norm(f, cfg.p, q);
  }
  const EnergyResult E = affine_energy(prof);
  j["starred_seminorm"] = std::pow(prof.integral(), 1.0 / cfg.p);
  j["energy"] = E.value;
  j["degenerate"] = E.degenerate;
  j["infinite"] = E.infinite;
  j["tail_budget"] = E.tail_budget;
  j["profile"] = profile_json(prof);
  emit(out_path, j.dump(2) + "\n", out);
  return 0;
}

int run_optimize(const std::string& config, const std::string& out_path, const std::string& trace_path,
                 std::ostream& out) {
  const ExperimentConfig cfg = config_with_field(config);
  if (cfg.field.is_grid()) throw ConfigError("optimize: grid fields are not supported, use a gaussian_mix field");
  const QuadratureBundle q(cfg.dimension, cfg.quadrature);
  OptimizerOptions opt = cfg.optimizer;
  const MinimizeResult res = minimize(*cfg.field.analytic, cfg.params(), opt, q);
  Json j;
  j["T"] = matrix_json(res.T.matrix());
  j["T_aligned"] = matrix_json(polar_align(res.T.matrix()));
  j["value"] = res.value;
  j["reason"] = res.trace.reason;
  j["iterations"] = res.trace.entries.size() - 1;
  emit(out_path, j.dump(2) + "\n", out);

  std::string csv = "iteration,objective,grad_norm,step,hash\n";
  for (std::size_t i = 0; i < res.trace.entries.size(); ++i) {
    const TraceEntry& e = res.trace.entries[i];
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(e.hash));
    csv += std::to_string(i) + "," + num(e.objective) + "," + num(e.grad_norm) + "," + num(e.step) + "," + hash + "\n";
  }
  if (!trace_path.empty()) write_file(trace_path, csv);
  else if (!out_path.empty()) out << csv;
  return res.trace.reason == "converged" ? 0 : 1;
}

SuiteOptions suite_options(const std::string& config, const std::string& family, const std::uint64_t* seed) {
  SuiteOptions o;
  if (!config.empty()) {
    const ExperimentConfig cfg = load_config(config);
    o.quadrature = cfg.quadrature;
    o.seed = cfg.seed;
  }
  if (!family.empty()) {
    if (!std::filesystem::exists(family)) throw ConfigError("family file not found: " + family);
    o.family = load_family(family);
  }
  if (seed) o.seed = *seed;
  return o;
}

void write_suite(const std::filesystem::path& dir, const std::string& name, const VerificationReport& rep,
                 bool timings) {
  write_file(dir / (name + ".csv"), rep.to_csv(timings));
  write_file(dir / (name + "_plots.csv"), rep.plots_csv());
}

int run_verify(const std::string& suite, const std::string& out_dir, const SuiteOptions& o, bool timings,
               std::ostream& out, std::ostream& err) {
  const VerificationReport rep = run_suite(suite, o);
  if (out_dir.empty()) {
    out << rep.to_csv(timings);
  } else {
    write_suite(out_dir, suite, rep, timings);
  }
  for (const auto& c : rep.checks)
    if (!c.pass) err << "FAIL " << c.suite << "/" << c.id << " lhs=" << num(c.lhs) << " rhs=" << num(c.rhs) << "\n";
  err << rep.summary() << "\n";
  return rep.passed() ? 0 : 1;
}

int run_report(const std::string& out_dir, const SuiteOptions& o, bool timings, std::ostream& err) {
  const std::filesystem::path dir(out_dir);
  VerificationReport all;
  all.suite = "all";
  for (const auto& name : suite_names()) {
    const VerificationReport rep = run_suite(name, o);
    write_suite(dir, name, rep, timings);
    err << rep.summary() << "\n";
    all.append(rep);
  }
  write_file(dir / "all.csv", all.to_csv(timings));
  // one long-format file per figure: series named "<figure>/<variant>"
  std::map<std::string, std::string> figures;
  for (const auto& p : all.plots) {
    const std::string fig = p.series.substr(0, p.series.find('/'));
    auto& text = figures[fig];
    if (text.empty()) text = "series,x,y\n";
    text += p.series + "," + num(p.x) + "," + num(p.y) + "\n";
  }
  for (const auto& [fig, text] : figures) write_file(dir / ("plot_" + fig + ".csv"), text);
  return all.passed() ? 0 : 1;
}

int run_constants(const std::string& formula, int N, const double* p, const double* s, const double* K1,
                  const double* K2, const double* gamma, std::ostream& out) {
  auto need = [&](const double* v, const char* flag) {
    if (!v) throw ConfigError("constants --formula " + formula + ": missing " + flag);
    return *v;
  };
  if (formula == "c1-first") {
    const SupResult r = c1_first_approach(N);
    out << num(r.value) << "\nargmax " << num(r.argmax) << "\n";
  } else if (formula == "c1-tilde") {
    out << num(c1_second_approach(need(p, "--p"), N)) << "\n";
  } else if (formula == "c1-general") {
    const GeneralConstant c = c1_general(need(s, "--s"), need(p, "--p"), N, need(K1, "--K1"), need(K2, "--K2"));
    out << num(c.value) << "\nargmax " << num(c.argmax) << "\nC2 " << num(c.c2) << "\n";
  } else if (formula == "c-gamma") {
    const SupResult r = c_gamma(need(gamma, "--gamma"), N);
    out << num(r.value) << "\nargmax " << num(r.argmax) << "\n";
  } else {
    throw ConfigError("unknown formula " + formula);
  }
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Affine Sobolev energies: evaluation, optimization and verification"};
  app.require_subcommand(1);

  std::string config, out_path, trace_path, suite, family, formula;
  bool timings = false;
  std::uint64_t seed = 0;
  int N = 2;
  double p = 0, s = 0, K1 = 0, K2 = 0, gamma = 0;

  auto* energy = app.add_subcommand("energy", "semi-norm, directional profile and affine energy of a field");
  energy->add_option("--config", config, "experiment JSON")->required();
  energy->add_option("--out", out_path, "write the JSON result here instead of stdout");

  auto* optimize = app.add_subcommand("optimize", "minimize the semi-norm over SL_N");
  optimize->add_option("--config", config, "experiment JSON")->required();
  optimize->add_option("--out", out_path, "write the JSON result here instead of stdout");
  optimize->add_option("--trace", trace_path, "write the iteration trace CSV here");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember({"core", "inequalities", "optimizer", "noimpro", "all"}));
  verify->add_option("--out", out_path, "directory for <suite>.csv and <suite>_plots.csv");
  auto* verify_seed = verify->add_option("--seed", seed, "seed for random transforms");
  verify->add_option("--config", config, "experiment JSON supplying quadrature and seed");
  verify->add_option("--family", family, "family JSON replacing the built-in one");
  verify->add_flag("--timings", timings, "record wall time (CSV is then not reproducible)");

  auto* report = app.add_subcommand("report", "run every suite and write CSV and plot data");
  report->add_option("--out", out_path, "output directory")->required();
  auto* report_seed = report->add_option("--seed", seed, "seed for random transforms");
  report->add_option("--config", config, "experiment JSON supplying quadrature and seed");
  report->add_option("--family", family, "family JSON replacing the built-in one");
  report->add_flag("--timings", timings, "record wall time");

  auto* constants = app.add_subcommand("constants", "evaluate an explicit constant");
  constants->add_option("--formula", formula, "formula name")
      ->required()
      ->check(CLI::IsMember({"c1-first", "c1-tilde", "c1-general", "c-gamma"}));
  constants->add_option("--N", N, "dimension")->check(CLI::Range(2, 64));
  auto* o_p = constants->add_option("--p", p, "integrability exponent");
  auto* o_s = constants->add_option("--s", s, "smoothness");
  auto* o_k1 = constants->add_option("--K1", K1, "lower slicing constant");
  auto* o_k2 = constants->add_option("--K2", K2, "upper slicing constant");
  auto* o_gamma = constants->add_option("--gamma", gamma, "approximation factor");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (energy->parsed()) return run_energy(config, out_path, out);
    if (optimize->parsed()) return run_optimize(config, out_path, trace_path, out);
    if (verify->parsed())
      return run_verify(suite, out_path, suite_options(config, family, verify_seed->count() ? &seed : nullptr),
                        timings, out, err);
    if (report->parsed())
      return run_report(out_path, suite_options(config, family, report_seed->count() ? &seed : nullptr), timings, err);
    if (constants->parsed())
      return run_constants(formula, N, o_p->count() ? &p : nullptr, o_s->count() ? &s : nullptr,
                           o_k1->count() ? &K1 : nullptr, o_k2->count() ? &K2 : nullptr,
                           o_gamma->count() ? &gamma : nullptr, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace affsob
