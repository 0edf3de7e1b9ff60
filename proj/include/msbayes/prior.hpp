#pragma once

#include <map>
#include <optional>
#include <string>

#include "msbayes/data.hpp"

namespace msbayes {

enum class PriorKind { Normal, Gamma };

/// Prior for a single scalar parameter: normal(mean, sd) for regression
/// coefficients, gamma(shape, rate) for Weibull shape/scale. A fixed value
/// removes the parameter from sampling and contributes nothing to the
/// log prior.
struct ParameterPrior {
  PriorKind kind = PriorKind::Normal;
  double a = 0.0;  // mean (normal) or shape (gamma)
  double b = 1.0;  // sd (normal) or rate (gamma)
  std::optional<double> fixed;

  static ParameterPrior normal(double mean, double sd) {
    return {PriorKind::Normal, mean, sd, std::nullopt};
  }
  static ParameterPrior gamma(double shape, double rate) {
    return {PriorKind::Gamma, shape, rate, std::nullopt};
  }
  ParameterPrior fixed_at(double value) const {
    ParameterPrior p = *this;
    p.fixed = value;
    return p;
  }

  bool is_fixed() const { return fixed.has_value(); }
  double log_density(double x) const;
  void validate(bool positive_support) const;
  std::string describe() const;
};

/// Priors for the four parameters of one transition.
struct TransitionPriors {
  ParameterPrior shape = ParameterPrior::gamma(0.01, 0.01);
  ParameterPrior scale = ParameterPrior::gamma(0.01, 0.01);
  ParameterPrior beta_sex = ParameterPrior::normal(0.0, 100.0);
  ParameterPrior beta_age = ParameterPrior::normal(0.0, 100.0);
};

/// Independent priors per transition. Defaults are wide: normal(0, 100) on
/// coefficients, gamma(0.01, 0.01) on shapes and scales.
struct PriorSpec {
  std::map<TransitionLabel, TransitionPriors> transitions;

  static PriorSpec defaults(ModelFamily family);
  const TransitionPriors& at(TransitionLabel label) const;
  TransitionPriors& at(TransitionLabel label);
  void validate(ModelFamily family) const;
};

/// Sum of log prior densities over all non-fixed parameters of the set.
double log_prior(const ParameterSet& params, const PriorSpec& prior);

/// log_likelihood + log_prior (unnormalized log posterior).
double log_posterior(ModelFamily family, const ParameterSet& params, const CohortDataset& data,
                     const PriorSpec& prior);

}  // namespace msbayes
