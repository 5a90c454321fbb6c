#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "affsob/fields.hpp"
#include "affsob/quadrature.hpp"
#include "affsob/seminorms.hpp"

namespace affsob {

struct SupResult {
  double value = 0.0;
  double argmax = 0.0;  // λ
};

// sup over λ in (lo, lo·span] of g(λ): log-grid bracketing then golden-section
// in log λ to 1e-12. A sup approached at λ → lo⁺ is reported at λ = lo(1+1e-9).
SupResult maximize_log(const std::function<double(double)>& g, double lo, double span = 1e7, int scan = 2000);

SupResult c1_first_approach(int N);
double c1_second_approach(double p, int N);

struct GeneralConstant {
  double value = 0.0;
  double argmax = 0.0;
  double c2 = 0.0;  // C² = K²
};
GeneralConstant c1_general(double s, double p, int N, double K1, double K2);

SupResult c_gamma(double gamma, int N);

struct SlicingEstimate {
  double K1 = 0.0;
  double K2 = 0.0;
  int samples = 0;
  int excluded = 0;  // degenerate members skipped
};
// min / max of |f|_{W^{s,p}} / Σ_i D(f, u_i)^{1/p} over the family and frames.
SlicingEstimate estimate_slicing_constants(const std::vector<AnalyticField>& family, const SmoothnessParams& params,
                                           const std::vector<Eigen::MatrixXd>& frames, const QuadratureBundle& quads);

}  // namespace affsob
