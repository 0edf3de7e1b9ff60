#include "msbayes/prior.hpp"

#include <cmath>
#include <stdexcept>

#include "msbayes/likelihood.hpp"

namespace msbayes {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;
}

double ParameterPrior::log_density(double x) const {
  if (is_fixed()) return 0.0;
  if (kind == PriorKind::Normal) {
    const double z = (x - a) / b;
    return -std::log(b) - 0.5 * kLogTwoPi - 0.5 * z * z;
  }
  if (!(x > 0.0)) {
    throw std::domain_error("gamma prior evaluated at a nonpositive value");
  }
  return a * std::log(b) - std::lgamma(a) + (a - 1.0) * std::log(x) - b * x;
}

void ParameterPrior::validate(bool positive_support) const {
  if (kind == PriorKind::Normal) {
    if (!(std::isfinite(a) && std::isfinite(b) && b > 0.0)) {
      throw std::invalid_argument("normal prior requires finite mean and sd > 0");
    }
  } else {
    if (!(std::isfinite(a) && a > 0.0 && std::isfinite(b) && b > 0.0)) {
      throw std::invalid_argument("gamma prior requires shape > 0 and rate > 0");
    }
  }
  if (fixed.has_value()) {
    if (!std::isfinite(*fixed)) throw std::invalid_argument("fixed value must be finite");
    if (positive_support && !(*fixed > 0.0)) {
      throw std::invalid_argument("fixed value must be > 0 for shape/scale parameters");
    }
  }
}

std::string ParameterPrior::describe() const {
  auto num = [](double x) {
    std::string s = std::to_string(x);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  if (is_fixed()) return "fixed(" + num(*fixed) + ")";
  if (kind == PriorKind::Normal) return "normal(" + num(a) + "," + num(b) + ")";
  return "gamma(" + num(a) + "," + num(b) + ")";
}

PriorSpec PriorSpec::defaults(ModelFamily family) {
  PriorSpec spec;
  for (TransitionLabel label : transition_labels(family)) {
    spec.transitions.emplace(label, TransitionPriors{});
  }
  return spec;
}

const TransitionPriors& PriorSpec::at(TransitionLabel label) const {
  auto it = transitions.find(label);
  if (it == transitions.end()) {
    throw std::out_of_range("prior spec has no transition " + to_string(label));
  }
  return it->second;
}

TransitionPriors& PriorSpec::at(TransitionLabel label) {
  auto it = transitions.find(label);
  if (it == transitions.end()) {
    throw std::out_of_range("prior spec has no transition " + to_string(label));
  }
  return it->second;
}

void PriorSpec::validate(ModelFamily family) const {
  for (TransitionLabel label : transition_labels(family)) {
    const TransitionPriors& tp = at(label);
    tp.shape.validate(true);
    tp.scale.validate(true);
    tp.beta_sex.validate(false);
    tp.beta_age.validate(false);
  }
}

double log_prior(const ParameterSet& params, const PriorSpec& prior) {
  double total = 0.0;
  for (const TransitionParams& tp : params.transitions()) {
    const TransitionPriors& pr = prior.at(tp.label);
    total += pr.shape.log_density(tp.baseline.shape);
    total += pr.scale.log_density(tp.baseline.scale);
    total += pr.beta_sex.log_density(tp.coeffs.beta_sex);
    total += pr.beta_age.log_density(tp.coeffs.beta_age);
  }
  return total;
}

double log_posterior(ModelFamily family, const ParameterSet& params, const CohortDataset& data,
                     const PriorSpec& prior) {
  return log_likelihood(family, params, data) + log_prior(params, prior);
}

}  // namespace msbayes
