#include <cmath>
#include <fstream>
#include <sstream>

#include "affsob/errors.hpp"
#include "affsob/fields.hpp"

namespace affsob {

GridField::GridField(std::vector<int> shape, std::vector<double> spacing, std::vector<double> values,
                     double support_radius)
    : shape_(std::move(shape)), spacing_(std::move(spacing)), values_(std::move(values)), R_(support_radius) {
  const int d = dimension();
  if (d < 1 || d > kMaxDim) throw DomainError("GridField: dimension must be between 1 and 3");
  if (static_cast<int>(spacing_.size()) != d) throw DomainError("GridField: spacing/shape mismatch");
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) {
    if (shape_[a] < 2) throw DomainError("GridField: need at least two nodes per axis");
    if (!(spacing_[a] > 0)) throw DomainError("GridField: spacing must be positive");
    total *= static_cast<std::size_t>(shape_[a]);
  }
  if (values_.size() != total) throw DomainError("GridField: value count does not match shape");
  if (!(R_ > 0)) throw DomainError("GridField: support radius must be positive");
  strides_.assign(d, 1);
  for (int a = d - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * shape_[a + 1];
}

GridField GridField::sample(int dim, int n, double half_extent, const std::function<double(const double*)>& f,
                            double support_radius, int layer) {
  std::vector<int> shape(dim, n);
  const double h = 2.0 * half_extent / (n - 1);
  std::vector<double> spacing(dim, h);
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= n;
  std::vector<double> vals(total);
  double x[3];
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t r = k;
    bool edge = false;
    for (int a = dim - 1; a >= 0; --a) {
      const int i = static_cast<int>(r % n);
      r /= n;
      x[a] = (i - 0.5 * (n - 1)) * h;
      if (i < layer || i >= n - layer) edge = true;
    }
    vals[k] = edge ? 0.0 : f(x);
  }
  return GridField(shape, spacing, std::move(vals), support_radius);
}

GridField GridField::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid file: " + path);
  int N = 0;
  in >> N;
  if (!in || N < 1 || N > kMaxDim) throw ConfigError("grid file: bad dimension in " + path);
  std::vector<int> shape(N);
  for (auto& s : shape) in >> s;
  double h = 0, R = 0;
  in >> h >> R;
  if (!in) throw ConfigError("grid file: malformed header in " + path);
  std::size_t total = 1;
  for (int s : shape) total *= static_cast<std::size_t>(s);
  std::vector<double> vals(total);
  for (auto& v : vals) in >> v;
  if (!in) throw ConfigError("grid file: not enough values in " + path);
  return GridField(shape, std::vector<double>(N, h), std::move(vals), R);
}

void GridField::save(const std::string& path) const {
  std::ofstream out(path);
  out.precision(17);
  out << dimension();
  for (int s : shape_) out << ' ' << s;
  out << ' ' << spacing_[0] << ' ' << R_ << '\n';
  for (double v : values_) out << v << '\n';
}

double GridField::cell_volume() const {
  double v = 1.0;
  for (double h : spacing_) v *= h;
  return v;
}

double GridField::coordinate(int axis, int i) const { return (i - 0.5 * (shape_[axis] - 1)) * spacing_[axis]; }

std::size_t GridField::index(const int* idx) const {
  std::size_t k = 0;
  for (int a = 0; a < dimension(); ++a) k += strides_[a] * idx[a];
  return k;
}

double GridField::operator()(const double* x) const {
  const int d = dimension();
  int i0[3];
  double fr[3];
  for (int a = 0; a < d; ++a) {
    const double u = x[a] / spacing_[a] + 0.5 * (shape_[a] - 1);
    if (!(u >= 0.0) || u > shape_[a] - 1) return 0.0;
    int i = static_cast<int>(std::floor(u));
    if (i >= shape_[a] - 1) i = shape_[a] - 2;
    i0[a] = i;
    fr[a] = u - i;
  }
  double s = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    std::size_t k = 0;
    for (int a = 0; a < d; ++a) {
      const int bit = (corner >> a) & 1;
      w *= bit ? fr[a] : 1.0 - fr[a];
      k += strides_[a] * (i0[a] + bit);
    }
    if (w != 0.0) s += w * values_[k];
  }
  return s;
}

double GridField::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != dimension()) throw DomainError("evaluate: dimension mismatch");
  return (*this)(x.data());
}

GridField GridField::scaled(double c) const {
  GridField g = *this;
  for (auto& v : g.values_) v *= c;
  return g;
}

GridField GridField::compose(const Eigen::MatrixXd& T) const {
  const int d = dimension();
  if (T.rows() != d || T.cols() != d) throw DomainError("GridField::compose: dimension mismatch");
  if (std::abs(T.determinant()) <= 1e-12) throw DomainError("GridField::compose: singular matrix");
  GridField g = *this;
  int idx[3];
  double x[3], y[3];
  for (std::size_t k = 0; k < values_.size(); ++k) {
    std::size_t r = k;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(r % shape_[a]);
      r /= shape_[a];
      x[a] = coordinate(a, idx[a]);
    }
    for (int i = 0; i < d; ++i) {
      y[i] = 0.0;
      for (int j = 0; j < d; ++j) y[i] += T(i, j) * x[j];
    }
    g.values_[k] = (*this)(y);
  }
  return g;
}

double GridField::boundary_max(int layer) const {
  const int d = dimension();
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    std::size_t r = k;
    bool edge = false;
    for (int a = d - 1; a >= 0; --a) {
      const int i = static_cast<int>(r % shape_[a]);
      r /= shape_[a];
      if (i < layer || i >= shape_[a] - layer) edge = true;
    }
    if (edge) m = std::max(m, std::abs(values_[k]));
  }
  return m;
}

}  // namespace affsob
