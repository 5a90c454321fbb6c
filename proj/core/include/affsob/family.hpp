#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "affsob/fields.hpp"

namespace affsob {

struct FamilyMember {
  std::string name;
  AnalyticField field;
  double support_radius = 0.0;  // 0 when the member is not (effectively) compactly supported
  bool compact() const { return support_radius > 0.0; }
};

// Closed-form field sampled on a grid: exp(-r²/2) ("gaussian") or
// exp(-1/(1-r²)) for r < 1 ("bump"), with r² = Σ (x_i / scale_i)².
struct GridMember {
  std::string name;
  int dim = 3;
  std::string kind;
  std::vector<double> scales;
  double half_extent = 3.0;
  double support_radius = 0.0;
  int nodes = 64;

  double value(const double* x) const;
  // x ↦ f(T x) (T = identity when empty) on an n^dim grid.
  GridField sample(int n, const Eigen::MatrixXd& T = {}) const;
  GridField sample() const { return sample(nodes); }
};

struct NoImprovementSpec {
  std::vector<double> R{1.0, 0.5, 0.25, 0.125};
  double psi_precision = 0.0625;
  double p = 1.0;
  double q = 4.0;
};

struct StandardFamily {
  std::vector<FamilyMember> analytic;
  std::vector<GridMember> grid;
  std::vector<double> descent_shears;
  NoImprovementSpec no_improvement;

  // Throws ConfigError for unknown names.
  const FamilyMember& member(const std::string& name) const;
  const GridMember& grid_member(const std::string& name) const;
};

// Throws ConfigError on malformed input or duplicate names.
StandardFamily parse_family(const std::string& json_text);
StandardFamily load_family(const std::string& path);
// The family.json compiled into the library.
const std::string& embedded_family_json();
const StandardFamily& standard_family();

}  // namespace affsob
