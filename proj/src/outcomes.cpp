#include "msbayes/outcomes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "msbayes/diagnostics.hpp"

namespace msbayes {

namespace {

// ∫_a^b h_cause(u) * rest(u) du over the composite subdivision. On the first
// subinterval of a singular left endpoint a == 0 the substitution
// u = x1 * v^(1/alpha) integrates the u^(alpha-1) factor exactly:
//   ∫_0^x1 h(u) rest(u) du = lambda e^lp x1^alpha ∫_0^1 rest(x1 v^(1/alpha)) dv.
template <class Rest>
double hazard_weighted_integral_once(const TransitionParams& cause, const CovariateVector& cov,
                                     double a, double b, Rest&& rest, const QuadratureConfig& q,
                                     bool right_singular) {
  if (b <= a) return 0.0;
  const double alpha = cause.baseline.shape;
  const double scale_lp = cause.baseline.scale * std::exp(linear_predictor(cause.coeffs, cov));
  // the u^(alpha-1) factor concentrates derivatives toward the time origin,
  // so the split is always geometric on the left, even when a > 0
  const auto breaks = composite_breakpoints(a, b, q, /*left_singular=*/true, right_singular);
  const bool substitute_head = (a == 0.0);

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    if (k == 0 && substitute_head) {
      // u = x1 v^(1/alpha) integrates the u^(alpha-1) factor exactly for any
      // shape; the leftover error is the (tiny) variation of rest() over the
      // head subinterval
      const double inv_alpha = 1.0 / alpha;
      const double head = scale_lp * std::pow(hi, alpha);
      total += head * gl_integrate(
                          [&](double v) { return rest(hi * std::pow(v, inv_alpha)); }, 0.0, 1.0,
                          q.nodes);
    } else {
      total += gl_integrate(
          [&](double u) { return hazard_at(cause, cov, u) * rest(u); }, lo, hi, q.nodes);
    }
  }
  return total;
}

template <class Rest>
double hazard_weighted_integral(const TransitionParams& cause, const CovariateVector& cov,
                                double a, double b, Rest&& rest, const QuadratureConfig& q,
                                bool right_singular = false) {
  const double value = hazard_weighted_integral_once(cause, cov, a, b, rest, q, right_singular);
  if (q.refine_tol > 0.0) {
    const double refined =
        hazard_weighted_integral_once(cause, cov, a, b, rest, q.with_nodes(2 * q.nodes),
                                      right_singular);
    if (!(std::abs(refined - value) <= q.refine_tol)) {
      throw NumericalError("quadrature did not converge within the refinement tolerance");
    }
    return refined;
  }
  return value;
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

void require_id(const ParameterSet& params, const char* what) {
  if (params.family() != ModelFamily::IllnessDeath) {
    throw std::invalid_argument(std::string(what) + " requires an illness-death parameter set");
  }
}

void check_range(double s, double t) {
  if (!(s >= 0.0) || !(t >= s)) {
    throw std::invalid_argument("time range requires 0 <= s <= t");
  }
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> times_) : times(std::move(times_)) {
  if (times.empty()) throw std::invalid_argument("time grid must be non-empty");
  if (!(times.front() >= 0.0)) throw std::invalid_argument("time grid must start at >= 0");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw std::invalid_argument("time grid must be finite");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
}

TimeGrid TimeGrid::regular(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) {
    throw std::invalid_argument("regular grid requires step > 0 and stop >= start");
  }
  std::vector<double> times;
  const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  times.reserve(n + 1);
  for (int i = 0; i <= n; ++i) times.push_back(start + i * step);
  return TimeGrid(std::move(times));
}

double cumulative_incidence(const ParameterSet& params, const CovariateVector& cov,
                            TransitionLabel cause, double t, const QuadratureConfig& q) {
  q.validate();
  if (t < 0.0) throw std::invalid_argument("cumulative incidence requires t >= 0");
  if (cause != TransitionLabel::FR && cause != TransitionLabel::FD) {
    throw std::invalid_argument("cumulative incidence is defined for the FR and FD causes");
  }
  if (t == 0.0) return 0.0;
  const TransitionParams& fr = params.at(TransitionLabel::FR);
  const TransitionParams& fd = params.at(TransitionLabel::FD);
  const TransitionParams& c = params.at(cause);
  auto survival = [&](double u) {
    return std::exp(-cumulative_hazard(fr, cov, u) - cumulative_hazard(fd, cov, u));
  };
  return hazard_weighted_integral(c, cov, 0.0, t, survival, q);
}

InitialStateProbabilities transition_probabilities_cr(const ParameterSet& params,
                                                      const CovariateVector& cov, double s,
                                                      double t, const QuadratureConfig& q) {
  q.validate();
  check_range(s, t);
  const TransitionParams& fr = params.at(TransitionLabel::FR);
  const TransitionParams& fd = params.at(TransitionLabel::FD);
  const double h_s = cumulative_hazard(fr, cov, s) + cumulative_hazard(fd, cov, s);
  auto stay = [&](double u) {
    return std::exp(h_s - cumulative_hazard(fr, cov, u) - cumulative_hazard(fd, cov, u));
  };
  InitialStateProbabilities out;
  out.p11 = stay(t);
  out.p12 = hazard_weighted_integral(fr, cov, s, t, stay, q);
  out.p13 = hazard_weighted_integral(fd, cov, s, t, stay, q);
  return out;
}

InitialStateProbabilities transition_probabilities_id(const ParameterSet& params,
                                                      const CovariateVector& cov, double s,
                                                      double t, const QuadratureConfig& q) {
  q.validate();
  require_id(params, "transition_probabilities_id");
  check_range(s, t);
  const TransitionParams& fr = params.at(TransitionLabel::FR);
  const TransitionParams& fd = params.at(TransitionLabel::FD);
  const TransitionParams& rd = params.at(TransitionLabel::RD);
  const double h_s = cumulative_hazard(fr, cov, s) + cumulative_hazard(fd, cov, s);
  auto stay_then_survive_refracture = [&](double u) {
    // p11(s, u) * p22(u, t | u): the refracture clock restarts at u
    return std::exp(h_s - cumulative_hazard(fr, cov, u) - cumulative_hazard(fd, cov, u) -
                    cumulative_hazard(rd, cov, t - u));
  };
  InitialStateProbabilities out;
  out.p11 = std::exp(h_s - cumulative_hazard(fr, cov, t) - cumulative_hazard(fd, cov, t));
  // the integrand has a kink at u = t from H_RD(t-u)
  out.p12 = hazard_weighted_integral(fr, cov, s, t, stay_then_survive_refracture, q,
                                     /*right_singular=*/true);
  out.p13 = 1.0 - out.p11 - out.p12;
  return out;
}

RefractureStateProbabilities transition_probabilities_id_refractured(
    const ParameterSet& params, const CovariateVector& cov, double s, double t, double t12,
    const QuadratureConfig& q) {
  q.validate();
  require_id(params, "transition_probabilities_id_refractured");
  check_range(s, t);
  if (!(t12 >= 0.0 && t12 <= s)) {
    throw std::invalid_argument("refractured start requires 0 <= t12 <= s");
  }
  const TransitionParams& rd = params.at(TransitionLabel::RD);
  RefractureStateProbabilities out;
  out.p22 = std::exp(cumulative_hazard(rd, cov, s - t12) - cumulative_hazard(rd, cov, t - t12));
  out.p23 = 1.0 - out.p22;
  return out;
}

std::string to_string(Functional functional) {
  switch (functional) {
    case Functional::CifRefracture: return "cif_refracture";
    case Functional::CifDeath: return "cif_death";
    case Functional::StayInitial: return "p11";
    case Functional::OccupyRefracture: return "p12";
    case Functional::DeathAny: return "p13";
    case Functional::StayRefracture: return "p22";
    case Functional::DeathAfterRefracture: return "p23";
  }
  return "?";
}

namespace {

bool id_only(Functional f) {
  return f == Functional::OccupyRefracture || f == Functional::DeathAny ||
         f == Functional::StayRefracture || f == Functional::DeathAfterRefracture;
}

// evaluates one functional for one parameter draw over the whole grid
void evaluate_functional(const ParameterSet& params, const FunctionalSpec& spec,
                         const CovariateVector& cov, const TimeGrid& grid,
                         const QuadratureConfig& q, double* out) {
  const std::size_t n = grid.times.size();
  switch (spec.functional) {
    case Functional::CifRefracture:
    case Functional::CifDeath: {
      // the integrand does not depend on t, so accumulate along the grid
      const TransitionLabel cause = spec.functional == Functional::CifRefracture
                                        ? TransitionLabel::FR
                                        : TransitionLabel::FD;
      const TransitionParams& fr = params.at(TransitionLabel::FR);
      const TransitionParams& fd = params.at(TransitionLabel::FD);
      const TransitionParams& c = params.at(cause);
      auto survival = [&](double u) {
        return std::exp(-cumulative_hazard(fr, cov, u) - cumulative_hazard(fd, cov, u));
      };
      double acc = 0.0;
      double prev = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += hazard_weighted_integral(c, cov, prev, grid.times[i], survival, q);
        prev = grid.times[i];
        out[i] = clamp01(acc);
      }
      return;
    }
    case Functional::StayInitial: {
      const TransitionParams& fr = params.at(TransitionLabel::FR);
      const TransitionParams& fd = params.at(TransitionLabel::FD);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = grid.times[i];
        out[i] = std::exp(-cumulative_hazard(fr, cov, t) - cumulative_hazard(fd, cov, t));
      }
      return;
    }
    case Functional::OccupyRefracture:
    case Functional::DeathAny: {
      for (std::size_t i = 0; i < n; ++i) {
        const auto probs = transition_probabilities_id(params, cov, 0.0, grid.times[i], q);
        out[i] = clamp01(spec.functional == Functional::OccupyRefracture ? probs.p12 : probs.p13);
      }
      return;
    }
    case Functional::StayRefracture:
    case Functional::DeathAfterRefracture: {
      for (std::size_t i = 0; i < n; ++i) {
        const auto probs = transition_probabilities_id_refractured(params, cov, spec.t12,
                                                                   grid.times[i], spec.t12, q);
        out[i] = clamp01(spec.functional == Functional::StayRefracture ? probs.p22 : probs.p23);
      }
      return;
    }
  }
}

std::vector<int> select_draws(int total, int max_draws) {
  std::vector<int> idx;
  if (max_draws <= 0 || max_draws >= total) {
    idx.resize(total);
    for (int i = 0; i < total; ++i) idx[i] = i;
  } else {
    idx.reserve(max_draws);
    for (int k = 0; k < max_draws; ++k) {
      idx.push_back(static_cast<int>(static_cast<long long>(k) * total / max_draws));
    }
  }
  return idx;
}

}  // namespace

CurveEstimate posterior_curve(const PosteriorDraws& draws, const FunctionalSpec& spec,
                              const CovariateVector& cov, const TimeGrid& grid,
                              const QuadratureConfig& q, int max_draws) {
  if (draws.total_draws() < 1) throw std::invalid_argument("posterior_curve needs draws");
  if (id_only(spec.functional) && draws.family != ModelFamily::IllnessDeath) {
    throw std::invalid_argument(to_string(spec.functional) +
                                " is not defined for competing-risks draws");
  }
  if ((spec.functional == Functional::StayRefracture ||
       spec.functional == Functional::DeathAfterRefracture) &&
      grid.times.front() < spec.t12) {
    throw std::invalid_argument("grid for a refractured-start functional must begin at t >= t12");
  }

  const auto idx = select_draws(draws.total_draws(), max_draws);
  const std::size_t n_points = grid.times.size();
  std::vector<double> values(idx.size() * n_points);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const ParameterSet params = draws.parameter_set_at(idx[k]);
    evaluate_functional(params, spec, cov, grid, q, values.data() + k * n_points);
  }

  CurveEstimate curve;
  curve.times = grid.times;
  curve.mean.resize(n_points);
  curve.lower.resize(n_points);
  curve.upper.resize(n_points);
  std::vector<double> column(idx.size());
  for (std::size_t i = 0; i < n_points; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      column[k] = values[k * n_points + i];
      sum += column[k];
    }
    curve.mean[i] = sum / idx.size();
    // the band must contain the mean; guard the degenerate-draw case where
    // summation rounding puts the mean one ulp outside the quantiles
    curve.lower[i] = std::min(sample_quantile(column, 0.025), curve.mean[i]);
    curve.upper[i] = std::max(sample_quantile(column, 0.975), curve.mean[i]);
  }
  return curve;
}

std::vector<IncidenceCell> incidence_table(const PosteriorDraws& draws,
                                           std::span<const Profile> profiles, double horizon,
                                           const QuadratureConfig& q, int max_draws) {
  if (profiles.empty()) throw std::invalid_argument("incidence_table needs profiles");
  if (!(horizon > 0.0)) throw std::invalid_argument("incidence horizon must be > 0");

  std::vector<TransitionLabel> rows = {TransitionLabel::FR, TransitionLabel::FD};
  if (draws.family == ModelFamily::IllnessDeath) rows.push_back(TransitionLabel::RD);

  const auto idx = select_draws(draws.total_draws(), max_draws);
  std::vector<IncidenceCell> cells;
  std::vector<double> values(idx.size());
  for (TransitionLabel row : rows) {
    for (const Profile& profile : profiles) {
      const CovariateVector cov(profile.woman ? 1.0 : 0.0, profile.age - draws.age_center);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const ParameterSet params = draws.parameter_set_at(idx[k]);
        double v;
        if (row == TransitionLabel::RD) {
          v = transition_probabilities_id_refractured(params, cov, 0.0, horizon, 0.0, q).p23;
        } else {
          v = cumulative_incidence(params, cov, row, horizon, q);
        }
        values[k] = clamp01(v);
      }
      double sum = 0.0;
      for (double v : values) sum += v;
      IncidenceCell cell;
      cell.transition = row;
      cell.profile = profile;
      cell.mean_pct = 100.0 * sum / values.size();
      cell.lo_pct = 100.0 * sample_quantile(values, 0.025);
      cell.hi_pct = 100.0 * sample_quantile(values, 0.975);
      cells.push_back(cell);
    }
  }
  return cells;
}

OccupancyDecomposition occupancy_decomposition(const PosteriorDraws& draws,
                                               const CovariateVector& cov, const TimeGrid& grid,
                                               const QuadratureConfig& q, int max_draws) {
  if (draws.family != ModelFamily::IllnessDeath) {
    throw std::invalid_argument("occupancy decomposition requires illness-death draws");
  }
  const auto cif = posterior_curve(draws, {Functional::CifRefracture, 0.0}, cov, grid, q,
                                   max_draws);
  const auto occupancy = posterior_curve(draws, {Functional::OccupyRefracture, 0.0}, cov, grid,
                                         q, max_draws);
  OccupancyDecomposition out;
  out.times = grid.times;
  out.cif_refracture = cif.mean;
  out.occupancy_refracture = occupancy.mean;
  out.dead_after_refracture.resize(grid.times.size());
  for (std::size_t i = 0; i < grid.times.size(); ++i) {
    out.dead_after_refracture[i] =
        std::max(0.0, out.cif_refracture[i] - out.occupancy_refracture[i]);
  }
  return out;
}

}  // namespace msbayes
