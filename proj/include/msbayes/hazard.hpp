#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace msbayes {

/// Labelled transitions of the event-history models: first fracture to
/// refracture (FR), first fracture to death (FD), refracture to death (RD).
enum class TransitionLabel { FR, FD, RD };

std::string to_string(TransitionLabel label);
std::optional<TransitionLabel> transition_label_from(std::string_view text);

/// Weibull baseline hazard alpha * lambda * t^(alpha - 1).
///
/// shape (alpha) is dimensionless, scale (lambda) carries units
/// time^(-alpha); both must be strictly positive and finite.
struct WeibullShapeScale {
  WeibullShapeScale(double shape, double scale);

  double shape;
  double scale;
};

/// Log hazard ratios: per unit of the woman indicator and per year of
/// centered age.
struct RegressionCoefficients {
  RegressionCoefficients(double beta_sex, double beta_age);

  double beta_sex;
  double beta_age;
};

/// Covariates of one subject: woman indicator in {0, 1} and age in years
/// minus the cohort centering constant.
struct CovariateVector {
  CovariateVector(double woman, double age_centered);

  double woman;
  double age_centered;
};

/// Parameters of one labelled transition under the Weibull
/// proportional-hazards form h(t) = alpha*lambda*t^(alpha-1) * exp(beta'x).
struct TransitionParams {
  TransitionParams(TransitionLabel label, WeibullShapeScale baseline,
                   RegressionCoefficients coeffs);

  TransitionLabel label;
  WeibullShapeScale baseline;
  RegressionCoefficients coeffs;
};

/// beta_sex * woman + beta_age * age_centered.
double linear_predictor(const RegressionCoefficients& coeffs, const CovariateVector& cov);

/// Hazard at t > 0. Rejects t <= 0: with shape < 1 the baseline diverges at
/// zero, so callers must keep event times strictly positive.
double hazard_at(const TransitionParams& tp, const CovariateVector& cov, double t);

/// log of hazard_at, computed directly in log space.
double log_hazard_at(const TransitionParams& tp, const CovariateVector& cov, double t);

/// Closed-form cumulative hazard lambda * t^alpha * exp(beta'x), t >= 0.
double cumulative_hazard(const TransitionParams& tp, const CovariateVector& cov, double t);

/// exp(-sum of cumulative hazards): probability of no transition out of the
/// shared origin state by t. Equals the stay-put transition probability
/// p11(0, t).
double all_causes_survival(std::span<const TransitionParams> tps, const CovariateVector& cov,
                           double t);

}  // namespace msbayes
