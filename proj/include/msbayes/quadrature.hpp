#pragma once

#include <stdexcept>
#include <vector>

namespace msbayes {

/// Numerical failure (quadrature refinement, sampler divergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Composite Gauss-Legendre settings. With refine_tol > 0 every integral is
/// recomputed at doubled node count and the two values must agree within the
/// tolerance, otherwise NumericalError is raised.
struct QuadratureConfig {
  int nodes = 64;                // Gauss-Legendre nodes per subinterval
  int subintervals_per_unit = 8; // composite density per unit time
  int min_subintervals = 4;
  double refine_tol = 0.0;       // 0 disables the refinement check

  void validate() const;
  QuadratureConfig with_nodes(int n) const {
    QuadratureConfig q = *this;
    q.nodes = n;
    return q;
  }
};

/// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
const std::vector<double>& gauss_legendre_nodes(int n);
const std::vector<double>& gauss_legendre_weights(int n);

/// Subinterval boundaries for the composite rule over [a, b]. Singular
/// endpoints get a geometric split (ratio 2, shortest subinterval at the
/// singular end); otherwise the split is uniform.
std::vector<double> composite_breakpoints(double a, double b, const QuadratureConfig& q,
                                          bool left_singular, bool right_singular);

/// Plain composite Gauss-Legendre integral of f over [a, b].
template <class F>
double gl_integrate(F&& f, double a, double b, int nodes) {
  const auto& xs = gauss_legendre_nodes(nodes);
  const auto& ws = gauss_legendre_weights(nodes);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) sum += ws[i] * f(mid + half * xs[i]);
  return half * sum;
}

}  // namespace msbayes
