#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace affsob {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

// n-point Gauss–Legendre rule on [-1, 1].
const Rule1D& gauss_legendre(int n);
// `panels` equal panels of `order`-point Gauss–Legendre on [a, b].
Rule1D composite_gauss(double a, double b, int panels, int order);

// Affine coordinates x = center + basis·y in which a field is integrated;
// the y-box is [-half_width, half_width]^N.
struct IntegrationFrame {
  Eigen::VectorXd center;
  Eigen::MatrixXd basis;
  double half_width = 8.0;
  double jacobian() const { return std::abs(basis.determinant()); }
  static IntegrationFrame standard(int dim, double half_width);
};

class BoxQuadrature {
 public:
  BoxQuadrature(int dim, double half_width, int nodes_per_axis);

  int dim() const { return dim_; }
  double half_width() const { return L_; }
  int nodes_per_axis() const { return n_; }
  const Rule1D& axis_rule() const { return axis_; }
  std::size_t size() const;
  // Tensor node k written into y[0..dim).
  void node(std::size_t k, double* y, double* w) const;
  double weight_sum() const;

  // Panel layout shared with the fractional line integration.
  int panels() const { return panels_; }
  int order() const { return order_; }

 private:
  int dim_;
  double L_;
  int n_;
  int panels_;
  int order_;
  Rule1D axis_;
};

using PointFunction = std::function<double(const double*)>;

// Tensor-product Gauss–Legendre sum over [-L, L]^N. Throws NumericalError on
// a non-finite sample.
double integrate_box(const PointFunction& g, const BoxQuadrature& q);
// Same rule mapped through x = c + W y, including |det W|.
double integrate_box(const PointFunction& g, const BoxQuadrature& q, const IntegrationFrame& frame);

struct SphereQuadrature {
  int dim = 2;
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> weights;
  // antipode[j] is the index of -nodes[j], or -1.
  std::vector<int> antipode;
  int resolution = 0;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
  double integrate(const std::function<double(const Eigen::VectorXd&)>& g) const;
};

double sphere_area(int N);
SphereQuadrature build_sphere_quadrature(int N, int resolution);

struct RadialQuadrature {
  double t_min = 1e-4;
  double t_max = 1e3;
  int panels = 16;
  int order = 8;
};

struct RadialIntegral {
  double value = 0.0;
  double head = 0.0;
  double body = 0.0;
  double tail = 0.0;
  // Width of the certified interval containing the true tail.
  double tail_width = 0.0;
};

// Nodes t_k and weights such that body = Σ w_k t_k^{-sp-1} g(t_k) on [t_min, t_max]
// (log-spaced panels; the weight already contains the Jacobian dt = t du).
struct RadialNodes {
  std::vector<double> t;
  std::vector<double> w;  // includes t^{-sp-1}·t
};
RadialNodes radial_nodes(double s, double p, const RadialQuadrature& rq);

// ∫_0^∞ t^{-sp-1} g(t) dt with the power-law head below t_min. Above t_max:
// when `tail_level` is given, g(t) = tail_level exactly there; otherwise the
// tail is the midpoint of [0, 2^{mp} sup g · t_max^{-sp}/(sp)].
RadialIntegral integrate_radial(const std::function<double(double)>& g, double s, double p, int m,
                                const RadialQuadrature& rq,
                                std::optional<double> tail_level = std::nullopt);
// Assemble from precomputed samples g(t_k) on radial_nodes() plus g(t_min).
RadialIntegral assemble_radial(const RadialNodes& nodes, const std::vector<double>& g_values,
                               double g_at_tmin, double s, double p, int m,
                               const RadialQuadrature& rq, std::optional<double> tail_level);

// |det T| / |T ω|^N.
double pushforward_weight(const Eigen::MatrixXd& T, const Eigen::VectorXd& omega);

struct QuadratureSettings {
  double box_halfwidth = 8.0;  // lower bound for L in the adapted frame
  int box_nodes = 48;
  int sphere_nodes = 128;
  double t_min = 1e-4;
  double t_max = 1e3;
  int t_panels = 10;
  int t_order = 8;
  bool antipodal = true;

  QuadratureSettings doubled() const;
  QuadratureSettings halved_sphere() const;
  int sphere_resolution(int N) const;
};

struct QuadratureBundle {
  QuadratureSettings settings;
  SphereQuadrature sphere;

  QuadratureBundle(int N, const QuadratureSettings& s = {});
  int dim() const { return sphere.dim; }
  RadialQuadrature radial() const;
  QuadratureBundle doubled() const { return QuadratureBundle(dim(), settings.doubled()); }
};

}  // namespace affsob
