#include <doctest.h>

#include <cmath>

#include "msbayes/likelihood.hpp"
#include "msbayes/prior.hpp"
#include "support.hpp"

using namespace msbayes;
using test_support::random_dataset;
using test_support::random_params;

TEST_CASE("normal prior density at the mean") {
  const auto prior = ParameterPrior::normal(0.0, 100.0);
  const double expected = -std::log(100.0) - 0.5 * std::log(2.0 * 3.14159265358979323846);
  CHECK(prior.log_density(0.0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("gamma prior peaks at its mode") {
  const auto prior = ParameterPrior::gamma(3.0, 2.0);
  const double mode = (3.0 - 1.0) / 2.0;
  CHECK(prior.log_density(mode) > prior.log_density(mode * 0.9));
  CHECK(prior.log_density(mode) > prior.log_density(mode * 1.1));
  CHECK_THROWS_AS(prior.log_density(0.0), std::domain_error);
  CHECK_THROWS_AS(prior.log_density(-1.0), std::domain_error);
}

TEST_CASE("fixed parameters contribute nothing") {
  PriorSpec spec = PriorSpec::defaults(ModelFamily::CompetingRisks);
  for (TransitionLabel label : transition_labels(ModelFamily::CompetingRisks)) {
    TransitionPriors& tp = spec.at(label);
    tp.shape = tp.shape.fixed_at(1.0);
    tp.scale = tp.scale.fixed_at(0.5);
    tp.beta_sex = tp.beta_sex.fixed_at(0.0);
    tp.beta_age = tp.beta_age.fixed_at(0.0);
  }
  Pcg64 rng(3, 0);
  const auto params = random_params(ModelFamily::CompetingRisks, rng);
  CHECK(log_prior(params, spec) == 0.0);
}

TEST_CASE("prior spec validation") {
  PriorSpec spec = PriorSpec::defaults(ModelFamily::IllnessDeath);
  CHECK_NOTHROW(spec.validate(ModelFamily::IllnessDeath));
  spec.at(TransitionLabel::FR).beta_sex = ParameterPrior::normal(0.0, -1.0);
  CHECK_THROWS_AS(spec.validate(ModelFamily::IllnessDeath), std::invalid_argument);
  spec = PriorSpec::defaults(ModelFamily::IllnessDeath);
  spec.at(TransitionLabel::RD).scale = ParameterPrior::gamma(0.0, 1.0);
  CHECK_THROWS_AS(spec.validate(ModelFamily::IllnessDeath), std::invalid_argument);
  spec = PriorSpec::defaults(ModelFamily::IllnessDeath);
  spec.at(TransitionLabel::RD).shape = spec.at(TransitionLabel::RD).shape.fixed_at(-2.0);
  CHECK_THROWS_AS(spec.validate(ModelFamily::IllnessDeath), std::invalid_argument);
  // competing-risks spec lacks the RD transition entirely
  const PriorSpec cr = PriorSpec::defaults(ModelFamily::CompetingRisks);
  CHECK_THROWS_AS(cr.validate(ModelFamily::IllnessDeath), std::out_of_range);
}

TEST_CASE("log posterior on an empty dataset is the log prior") {
  Pcg64 rng(5, 0);
  const auto params = random_params(ModelFamily::IllnessDeath, rng);
  const auto prior = PriorSpec::defaults(ModelFamily::IllnessDeath);
  const CohortDataset empty({}, 83.4);
  CHECK(log_posterior(ModelFamily::IllnessDeath, params, empty, prior) ==
        doctest::Approx(log_prior(params, prior)).epsilon(1e-14));
}

TEST_CASE("log posterior is finite on valid inputs") {
  Pcg64 rng(6, 0);
  const auto prior = PriorSpec::defaults(ModelFamily::IllnessDeath);
  for (int i = 0; i < 100; ++i) {
    const auto params = random_params(ModelFamily::IllnessDeath, rng);
    const auto data = random_dataset(40, rng);
    CHECK(std::isfinite(log_posterior(ModelFamily::IllnessDeath, params, data, prior)));
  }
}

TEST_CASE("log posterior separates into per-transition components") {
  Pcg64 rng(7, 0);
  const auto prior = PriorSpec::defaults(ModelFamily::IllnessDeath);
  for (int i = 0; i < 100; ++i) {
    const auto params = random_params(ModelFamily::IllnessDeath, rng);
    const auto data = random_dataset(150, rng);
    const double total = log_posterior(ModelFamily::IllnessDeath, params, data, prior);
    const auto components =
        per_transition_log_likelihood(ModelFamily::IllnessDeath, params, data);
    double sum = 0.0;
    for (const TransitionParams& tp : params.transitions()) {
      const TransitionPriors& tpr = prior.at(tp.label);
      sum += components.at(tp.label) + tpr.shape.log_density(tp.baseline.shape) +
             tpr.scale.log_density(tp.baseline.scale) +
             tpr.beta_sex.log_density(tp.coeffs.beta_sex) +
             tpr.beta_age.log_density(tp.coeffs.beta_age);
    }
    CHECK(std::abs(total - sum) <= 1e-12 * std::max(1.0, std::abs(total)));
  }
}
