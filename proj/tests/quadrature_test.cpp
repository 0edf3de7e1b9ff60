#include <doctest.h>

#include <cmath>

#include "msbayes/quadrature.hpp"

using namespace msbayes;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  // oracle: \int_0^1 x^k dx = 1/(k+1)
  for (int n : {2, 5, 16, 64}) {
    for (int k = 0; k <= 2 * n - 1; k += 7) {
      const double got = gl_integrate([k](double x) { return std::pow(x, k); }, 0.0, 1.0, n);
      CHECK(got == doctest::Approx(1.0 / (k + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Gauss-Legendre weights sum to the interval length") {
  for (int n : {2, 3, 8, 64, 128}) {
    const auto& ws = gauss_legendre_weights(n);
    double sum = 0.0;
    for (double w : ws) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-13));
    const auto& xs = gauss_legendre_nodes(n);
    for (int i = 0; i < n; ++i) {
      CHECK(xs[i] == doctest::Approx(-xs[n - 1 - i]).epsilon(1e-12));
      CHECK(xs[i] > -1.0);
      CHECK(xs[i] < 1.0);
    }
  }
}

TEST_CASE("smooth integral oracle") {
  // \int_0^pi sin = 2
  QuadratureConfig q;
  const auto breaks = composite_breakpoints(0.0, 3.14159265358979323846, q, false, false);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += gl_integrate([](double x) { return std::sin(x); }, breaks[i], breaks[i + 1], q.nodes);
  }
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("composite breakpoints cover the range and respect the minimum") {
  QuadratureConfig q;
  const auto uniform = composite_breakpoints(1.0, 3.0, q, false, false);
  CHECK(uniform.front() == 1.0);
  CHECK(uniform.back() == 3.0);
  CHECK(uniform.size() >= static_cast<std::size_t>(q.min_subintervals) + 1);
  for (std::size_t i = 1; i < uniform.size(); ++i) CHECK(uniform[i] > uniform[i - 1]);

  const auto geo = composite_breakpoints(0.0, 1.0, q, true, false);
  CHECK(geo.front() == 0.0);
  CHECK(geo.back() == 1.0);
  // widths double away from the singular end
  const double w0 = geo[1] - geo[0];
  const double w1 = geo[2] - geo[1];
  CHECK(w1 == doctest::Approx(2.0 * w0).epsilon(1e-9));

  const auto both = composite_breakpoints(0.0, 2.0, q, true, true);
  CHECK(both.front() == 0.0);
  CHECK(both.back() == 2.0);
  const double first = both[1] - both[0];
  const double last = both[both.size() - 1] - both[both.size() - 2];
  CHECK(first == doctest::Approx(last).epsilon(1e-9));

  const auto degenerate = composite_breakpoints(2.0, 2.0, q, true, false);
  CHECK(degenerate.size() == 2);
}

TEST_CASE("config validation") {
  QuadratureConfig q;
  CHECK_NOTHROW(q.validate());
  q.nodes = 1;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = QuadratureConfig{};
  q.refine_tol = -1.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}
