#pragma once

#include <vector>

#include "msbayes/data.hpp"
#include "msbayes/reference.hpp"
#include "msbayes/rng.hpp"
#include "msbayes/simulate.hpp"

namespace test_support {

using namespace msbayes;

inline TransitionParams random_transition(TransitionLabel label, Pcg64& rng) {
  const double alpha = rng.uniform(0.4, 2.0);
  const double lambda = rng.uniform(0.02, 1.0);
  const double beta_sex = rng.uniform(-1.0, 1.0);
  const double beta_age = rng.uniform(-0.1, 0.1);
  return TransitionParams(label, WeibullShapeScale(alpha, lambda),
                          RegressionCoefficients(beta_sex, beta_age));
}

inline ParameterSet random_params(ModelFamily family, Pcg64& rng) {
  std::vector<TransitionParams> tps;
  for (TransitionLabel label : transition_labels(family)) {
    tps.push_back(random_transition(label, rng));
  }
  return ParameterSet(family, std::move(tps));
}

inline CovariateVector random_covariates(Pcg64& rng) {
  return CovariateVector(rng.bernoulli(0.5) ? 1.0 : 0.0, rng.uniform(-15.0, 15.0));
}

/// Small synthetic dataset drawn from random illness-death parameters.
inline CohortDataset random_dataset(std::size_t n, Pcg64& rng) {
  SimulationSpec spec(ModelFamily::IllnessDeath, random_params(ModelFamily::IllnessDeath, rng), n,
                      rng.next_u64());
  spec.censor_time = rng.uniform(1.0, 6.0);
  return simulate_cohort(spec);
}

/// Exact one-parameter-family CIF when both transitions share the Weibull
/// shape: F_j(t) = (r_j / R) * (1 - exp(-R t^alpha)) with r_j the scaled
/// rates. Independent closed-form oracle for the quadrature.
inline double equal_shape_cif(double alpha, double r_cause, double r_total, double t) {
  return r_cause / r_total * (1.0 - std::exp(-r_total * std::pow(t, alpha)));
}

}  // namespace test_support
