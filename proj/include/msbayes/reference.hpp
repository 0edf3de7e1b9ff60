#pragma once

#include "msbayes/data.hpp"

namespace msbayes {
namespace reference {

/// Age-centering constant the reference estimates were computed with.
inline constexpr double kAgeCenter = 83.4;

/// Posterior-mean Weibull proportional-hazards estimates from a
/// population-wide elderly hip-fracture cohort (women/men aged 65+, ages
/// centered at 83.4 years). Handy as realistic defaults for simulation
/// studies and as a fixture for cross-checks.
ParameterSet competing_risks_estimates();
ParameterSet illness_death_estimates();

ParameterSet estimates(ModelFamily family);

}  // namespace reference
}  // namespace msbayes
