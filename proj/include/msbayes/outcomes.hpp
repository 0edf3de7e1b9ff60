#pragma once

#include <vector>

#include "msbayes/mcmc.hpp"
#include "msbayes/quadrature.hpp"

namespace msbayes {

/// Strictly increasing evaluation times, first >= 0.
struct TimeGrid {
  explicit TimeGrid(std::vector<double> times);
  static TimeGrid regular(double start, double stop, double step);

  std::vector<double> times;
};

/// Probability of failing from `cause` (FR or FD) before t in the presence
/// of the competing transition: integral of h_cause(u) * S(u) over [0, t]
/// by composite Gauss-Legendre, with the u^(alpha-1) singular head handled
/// by a power substitution.
double cumulative_incidence(const ParameterSet& params, const CovariateVector& cov,
                            TransitionLabel cause, double t, const QuadratureConfig& q);

struct InitialStateProbabilities {
  double p11 = 1.0;  // still in the initial state
  double p12 = 0.0;  // in the refracture state (competing risks: ever refractured)
  double p13 = 0.0;  // dead (competing risks: dead without refracture)
};

struct RefractureStateProbabilities {
  double p22 = 1.0;  // alive in the refracture state
  double p23 = 0.0;  // dead after refracture
};

/// Competing-risks transition probabilities from the initial state over
/// [s, t]: p11 in closed form, p12/p13 by quadrature. Their sum is 1 up to
/// quadrature error (a tested property, not enforced).
InitialStateProbabilities transition_probabilities_cr(const ParameterSet& params,
                                                      const CovariateVector& cov, double s,
                                                      double t, const QuadratureConfig& q);

/// Illness-death transition probabilities starting healthy at s: p11 closed
/// form, p12(s,t) = int p11(s,u) h_FR(u) p22(u,t|u) du, p13 by complement.
InitialStateProbabilities transition_probabilities_id(const ParameterSet& params,
                                                      const CovariateVector& cov, double s,
                                                      double t, const QuadratureConfig& q);

/// Illness-death probabilities starting in the refracture state entered at
/// t12 <= s: the post-refracture clock is reset to the refracture time.
RefractureStateProbabilities transition_probabilities_id_refractured(
    const ParameterSet& params, const CovariateVector& cov, double s, double t, double t12,
    const QuadratureConfig& q);

/// Time-indexed functionals of the posterior draws.
enum class Functional {
  CifRefracture,         // F(t) of the refracture cause
  CifDeath,              // F(t) of death without refracture
  StayInitial,           // p11(0, t)
  OccupyRefracture,      // p12(0, t), illness-death only
  DeathAny,              // p13(0, t), illness-death only
  StayRefracture,        // p22(t12, t | t12), illness-death only
  DeathAfterRefracture,  // p23(t12, t | t12), illness-death only
};

struct FunctionalSpec {
  Functional functional = Functional::CifRefracture;
  double t12 = 0.0;  // refracture time for the refractured-start functionals
};

std::string to_string(Functional functional);

/// Pointwise posterior mean and central credible band of a time-indexed
/// functional.
struct CurveEstimate {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.95;
};

/// Evaluates the functional at every retained draw and grid point and
/// reports the pointwise mean and equal-tailed credible band. max_draws > 0
/// subsamples the draws evenly (deterministically) to bound the cost.
CurveEstimate posterior_curve(const PosteriorDraws& draws, const FunctionalSpec& spec,
                              const CovariateVector& cov, const TimeGrid& grid,
                              const QuadratureConfig& q, int max_draws = 0);

struct Profile {
  bool woman = true;
  double age = 80.0;
};

struct IncidenceCell {
  TransitionLabel transition;
  Profile profile;
  double mean_pct = 0.0;
  double lo_pct = 0.0;
  double hi_pct = 0.0;
};

/// One-horizon incidence table: posterior mean and 95% interval, in percent,
/// of the FR and FD cumulative incidences per profile, plus the
/// refracture-to-death probability p23(0, horizon | 0) for illness-death
/// draws.
std::vector<IncidenceCell> incidence_table(const PosteriorDraws& draws,
                                           std::span<const Profile> profiles, double horizon,
                                           const QuadratureConfig& q, int max_draws = 0);

/// Occupancy split of the refracture incidence: ever-refractured (CIF),
/// currently refractured and alive (p12), and their difference, the
/// refractured subjects who have died. Posterior means on the grid.
struct OccupancyDecomposition {
  std::vector<double> times;
  std::vector<double> cif_refracture;
  std::vector<double> occupancy_refracture;
  std::vector<double> dead_after_refracture;
};

OccupancyDecomposition occupancy_decomposition(const PosteriorDraws& draws,
                                               const CovariateVector& cov, const TimeGrid& grid,
                                               const QuadratureConfig& q, int max_draws = 0);

}  // namespace msbayes
