#include "msbayes/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace msbayes {

void QuadratureConfig::validate() const {
  if (nodes < 2) throw std::invalid_argument("quadrature needs at least 2 nodes");
  if (subintervals_per_unit < 1 || min_subintervals < 1) {
    throw std::invalid_argument("quadrature subinterval counts must be >= 1");
  }
  if (refine_tol < 0.0 || !std::isfinite(refine_tol)) {
    throw std::invalid_argument("refine_tol must be >= 0");
  }
}

namespace {

struct GlRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton iteration on the Legendre recurrence; standard construction.
GlRule build_rule(int n) {
  GlRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const GlRule& cached_rule(int n) {
  static std::mutex mutex;
  static std::map<int, GlRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

}  // namespace

const std::vector<double>& gauss_legendre_nodes(int n) { return cached_rule(n).nodes; }
const std::vector<double>& gauss_legendre_weights(int n) { return cached_rule(n).weights; }

std::vector<double> composite_breakpoints(double a, double b, const QuadratureConfig& q,
                                          bool left_singular, bool right_singular) {
  if (!(b >= a)) throw std::invalid_argument("integration range requires b >= a");
  std::vector<double> breaks;
  if (b == a) {
    breaks = {a, b};
    return breaks;
  }
  const double len = b - a;
  const int count = std::max(q.min_subintervals,
                             static_cast<int>(std::ceil(q.subintervals_per_unit * len)));
  // a geometric split deeper than ~40 levels adds subintervals below double
  // resolution; cap it (the shortest subinterval is then ~len * 2^-39).
  // A floor of 16 levels keeps the subinterval touching a singular endpoint
  // short enough that the integrand barely varies across it.
  constexpr int kMaxGeometric = 40;
  constexpr int kMinGeometric = 16;

  auto geometric_left = [&](double lo, double hi, int k, std::vector<double>& out) {
    // widths double away from lo: w, 2w, 4w, ...
    const double w1 = (hi - lo) / (std::ldexp(1.0, k) - 1.0);
    out.push_back(lo);
    for (int i = 1; i < k; ++i) out.push_back(lo + w1 * (std::ldexp(1.0, i) - 1.0));
    out.push_back(hi);
  };
  auto geometric_right = [&](double lo, double hi, int k, std::vector<double>& out) {
    const double w1 = (hi - lo) / (std::ldexp(1.0, k) - 1.0);
    out.push_back(lo);
    for (int i = k - 1; i >= 1; --i) out.push_back(hi - w1 * (std::ldexp(1.0, i) - 1.0));
    out.push_back(hi);
  };

  if (left_singular && right_singular) {
    const int side =
        std::min(kMaxGeometric, std::max({q.min_subintervals, (count + 1) / 2, kMinGeometric / 2}));
    const double mid = 0.5 * (a + b);
    geometric_left(a, mid, side, breaks);
    breaks.pop_back();  // mid re-added by the right half
    geometric_right(mid, b, side, breaks);
  } else if (left_singular) {
    geometric_left(a, b, std::clamp(count, kMinGeometric, kMaxGeometric), breaks);
  } else if (right_singular) {
    geometric_right(a, b, std::clamp(count, kMinGeometric, kMaxGeometric), breaks);
  } else {
    breaks.push_back(a);
    for (int i = 1; i < count; ++i) breaks.push_back(a + len * i / count);
    breaks.push_back(b);
  }
  return breaks;
}

}  // namespace msbayes
