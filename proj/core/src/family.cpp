#include "affsob/family.hpp"

#include <cmath>
#include <set>

#include "affsob/errors.hpp"
#include "family_data.hpp"
#include "json_io.hpp"

namespace affsob {

double GridMember::value(const double* x) const {
  double r2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double u = x[a] / scales[a];
    r2 += u * u;
  }
  if (kind == "gaussian") return std::exp(-0.5 * r2);
  return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

GridField GridMember::sample(int n, const Eigen::MatrixXd& T) const {
  if (T.size() == 0) {
    return GridField::sample(dim, n, half_extent, [this](const double* x) { return value(x); }, support_radius);
  }
  if (T.rows() != dim || T.cols() != dim) throw DomainError("GridMember::sample: T has the wrong shape");
  return GridField::sample(
      dim, n, half_extent,
      [this, &T](const double* x) {
        double y[kMaxDim];
        for (int i = 0; i < dim; ++i) {
          y[i] = 0.0;
          for (int j = 0; j < dim; ++j) y[i] += T(i, j) * x[j];
        }
        return value(y);
      },
      support_radius);
}

const FamilyMember& StandardFamily::member(const std::string& name) const {
  for (const auto& m : analytic)
    if (m.name == name) return m;
  throw ConfigError("family: no analytic member named " + name);
}

const GridMember& StandardFamily::grid_member(const std::string& name) const {
  for (const auto& m : grid)
    if (m.name == name) return m;
  throw ConfigError("family: no grid member named " + name);
}

StandardFamily parse_family(const std::string& json_text) {
  using detail::Json;
  const Json j = detail::parse_json(json_text, "family");
  if (!j.is_object() || !j.contains("analytic")) throw ConfigError("family: missing \"analytic\"");

  StandardFamily fam;
  std::set<std::string> names;
  auto claim = [&](const std::string& n) {
    if (n.empty() || !names.insert(n).second) throw ConfigError("family: empty or duplicate member name \"" + n + "\"");
  };

  for (const auto& e : j["analytic"]) {
    FamilyMember m;
    m.name = e.value("name", std::string());
    claim(m.name);
    m.support_radius = e.value("support_radius", 0.0);
    if (e.contains("field")) {
      m.field = detail::analytic_from_json(e["field"], 0);
    } else if (e.contains("base") && e.contains("compose")) {
      const AnalyticField& base = fam.member(e["base"].get<std::string>()).field;
      const Eigen::MatrixXd M = detail::matrix_from_json(e["compose"], "family " + m.name + " compose");
      if (M.rows() != base.dimension() || M.cols() != base.dimension())
        throw ConfigError("family " + m.name + ": compose matrix has the wrong shape");
      m.field = affine_compose(base, M);
    } else {
      throw ConfigError("family " + m.name + ": needs \"field\" or \"base\" + \"compose\"");
    }
    fam.analytic.push_back(std::move(m));
  }

  if (j.contains("grid")) {
    for (const auto& e : j["grid"]) {
      GridMember g;
      g.name = e.value("name", std::string());
      claim(g.name);
      g.dim = e.value("dim", 3);
      g.kind = e.value("kind", std::string());
      if (g.kind != "gaussian" && g.kind != "bump") throw ConfigError("family " + g.name + ": kind must be gaussian or bump");
      const Eigen::VectorXd sc = detail::vector_from_json(e.value("scales", Json::array()), "family " + g.name + " scales");
      if (g.dim < 2 || g.dim > kMaxDim || sc.size() != g.dim) throw ConfigError("family " + g.name + ": bad dim/scales");
      g.scales.assign(sc.data(), sc.data() + sc.size());
      for (double s : g.scales)
        if (!(s > 0)) throw ConfigError("family " + g.name + ": scales must be positive");
      g.half_extent = e.value("half_extent", 3.0);
      g.support_radius = e.value("support_radius", g.half_extent);
      g.nodes = e.value("nodes", 64);
      if (g.nodes < 8 || !(g.half_extent > 0)) throw ConfigError("family " + g.name + ": bad grid size");
      fam.grid.push_back(std::move(g));
    }
  }

  if (j.contains("descent_shears"))
    for (const auto& k : j["descent_shears"]) fam.descent_shears.push_back(k.get<double>());
  if (j.contains("no_improvement")) {
    const Json& n = j["no_improvement"];
    NoImprovementSpec& s = fam.no_improvement;
    if (n.contains("R")) {
      s.R.clear();
      for (const auto& r : n["R"]) s.R.push_back(r.get<double>());
    }
    s.psi_precision = n.value("psi_precision", s.psi_precision);
    s.p = n.value("p", s.p);
    s.q = n.value("q", s.q);
    if (s.R.empty() || !(s.p >= 1) || !(s.q >= s.p)) throw ConfigError("family: bad no_improvement block");
  }
  return fam;
}

StandardFamily load_family(const std::string& path) { return parse_family(detail::read_text_file(path)); }

const std::string& embedded_family_json() {
  static const std::string text = detail::kFamilyJson;
  return text;
}

const StandardFamily& standard_family() {
  static const StandardFamily fam = parse_family(embedded_family_json());
  return fam;
}

}  // namespace affsob
