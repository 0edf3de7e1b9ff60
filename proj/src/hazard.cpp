#include "msbayes/hazard.hpp"

#include <cmath>
#include <stdexcept>

namespace msbayes {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

std::string to_string(TransitionLabel label) {
  switch (label) {
    case TransitionLabel::FR: return "FR";
    case TransitionLabel::FD: return "FD";
    case TransitionLabel::RD: return "RD";
  }
  return "?";
}

std::optional<TransitionLabel> transition_label_from(std::string_view text) {
  if (text == "FR" || text == "fr") return TransitionLabel::FR;
  if (text == "FD" || text == "fd") return TransitionLabel::FD;
  if (text == "RD" || text == "rd") return TransitionLabel::RD;
  return std::nullopt;
}

WeibullShapeScale::WeibullShapeScale(double shape_, double scale_)
    : shape(shape_), scale(scale_) {
  if (!(std::isfinite(shape) && shape > 0.0)) {
    throw std::invalid_argument("Weibull shape must be finite and > 0");
  }
  if (!(std::isfinite(scale) && scale > 0.0)) {
    throw std::invalid_argument("Weibull scale must be finite and > 0");
  }
}

RegressionCoefficients::RegressionCoefficients(double beta_sex_, double beta_age_)
    : beta_sex(beta_sex_), beta_age(beta_age_) {
  require_finite(beta_sex, "beta_sex");
  require_finite(beta_age, "beta_age");
}

CovariateVector::CovariateVector(double woman_, double age_centered_)
    : woman(woman_), age_centered(age_centered_) {
  if (woman != 0.0 && woman != 1.0) {
    throw std::invalid_argument("woman indicator must be 0 or 1");
  }
  require_finite(age_centered, "age_centered");
}

TransitionParams::TransitionParams(TransitionLabel label_, WeibullShapeScale baseline_,
                                   RegressionCoefficients coeffs_)
    : label(label_), baseline(baseline_), coeffs(coeffs_) {}

double linear_predictor(const RegressionCoefficients& coeffs, const CovariateVector& cov) {
  return coeffs.beta_sex * cov.woman + coeffs.beta_age * cov.age_centered;
}

double hazard_at(const TransitionParams& tp, const CovariateVector& cov, double t) {
  return std::exp(log_hazard_at(tp, cov, t));
}

double log_hazard_at(const TransitionParams& tp, const CovariateVector& cov, double t) {
  if (!(t > 0.0)) {
    throw std::domain_error("hazard requires t > 0 (baseline diverges at 0 for shape < 1)");
  }
  const double alpha = tp.baseline.shape;
  const double lambda = tp.baseline.scale;
  return std::log(alpha) + std::log(lambda) + (alpha - 1.0) * std::log(t) +
         linear_predictor(tp.coeffs, cov);
}

double cumulative_hazard(const TransitionParams& tp, const CovariateVector& cov, double t) {
  if (t < 0.0) throw std::domain_error("cumulative hazard requires t >= 0");
  if (t == 0.0) return 0.0;
  const double alpha = tp.baseline.shape;
  const double lambda = tp.baseline.scale;
  // log-space form keeps t^alpha stable for small shapes and large times
  return std::exp(std::log(lambda) + alpha * std::log(t) + linear_predictor(tp.coeffs, cov));
}

double all_causes_survival(std::span<const TransitionParams> tps, const CovariateVector& cov,
                           double t) {
  if (tps.empty()) throw std::invalid_argument("all_causes_survival: empty transition list");
  double total = 0.0;
  for (const auto& tp : tps) total += cumulative_hazard(tp, cov, t);
  return std::exp(-total);
}

}  // namespace msbayes
