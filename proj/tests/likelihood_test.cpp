#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "msbayes/likelihood.hpp"
#include "support.hpp"

using namespace msbayes;
using test_support::random_dataset;
using test_support::random_params;

namespace {

ParameterSet unit_exponential_params(ModelFamily family) {
  std::vector<TransitionParams> tps;
  for (TransitionLabel label : transition_labels(family)) {
    tps.emplace_back(label, WeibullShapeScale(1.0, 1.0), RegressionCoefficients(0.0, 0.0));
  }
  return ParameterSet(family, std::move(tps));
}

SubjectRecord record(double t, FirstOutcome outcome) {
  SubjectRecord r;
  r.id = "s";
  r.woman = 0.0;
  r.age_at_discharge = 83.4;
  r.t_first = t;
  r.first_outcome = outcome;
  return r;
}

}  // namespace

TEST_CASE("empty dataset has zero log likelihood") {
  const auto params = unit_exponential_params(ModelFamily::CompetingRisks);
  const CohortDataset data({}, 83.4);
  CHECK(log_likelihood(ModelFamily::CompetingRisks, params, data) == 0.0);
}

TEST_CASE("forced values for unit exponential hazards") {
  const auto params = unit_exponential_params(ModelFamily::CompetingRisks);

  // censored at 2: -(H_FR + H_FD) = -(2 + 2)
  const CohortDataset censored({record(2.0, FirstOutcome::Censored)}, 83.4);
  CHECK(log_likelihood(ModelFamily::CompetingRisks, params, censored) ==
        doctest::Approx(-4.0).epsilon(1e-14));

  // death at 1: log h_FD(1) - H_FR(1) - H_FD(1) = 0 - 2
  const CohortDataset death({record(1.0, FirstOutcome::Death)}, 83.4);
  CHECK(log_likelihood(ModelFamily::CompetingRisks, params, death) ==
        doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("family and parameter set must agree") {
  const auto params = unit_exponential_params(ModelFamily::CompetingRisks);
  const CohortDataset data({}, 0.0);
  CHECK_THROWS_AS(log_likelihood(ModelFamily::IllnessDeath, params, data),
                  std::invalid_argument);
}

TEST_CASE("decomposition: no refractures means a zero RD component") {
  const auto params = unit_exponential_params(ModelFamily::IllnessDeath);
  const CohortDataset data({record(1.0, FirstOutcome::Death), record(2.0, FirstOutcome::Censored)},
                           83.4);
  const auto components = per_transition_log_likelihood(ModelFamily::IllnessDeath, params, data);
  CHECK(components.at(TransitionLabel::RD) == 0.0);
}

TEST_CASE("components sum to the total exactly") {
  Pcg64 rng(101, 0);
  for (int i = 0; i < 100; ++i) {
    const auto data = random_dataset(60, rng);
    const auto params = random_params(ModelFamily::IllnessDeath, rng);
    const auto components =
        per_transition_log_likelihood(ModelFamily::IllnessDeath, params, data);
    double sum = 0.0;
    for (TransitionLabel label : transition_labels(ModelFamily::IllnessDeath)) {
      sum += components.at(label);
    }
    CHECK(sum == log_likelihood(ModelFamily::IllnessDeath, params, data));
  }
}

TEST_CASE("shared components are identical across families") {
  Pcg64 rng(102, 0);
  for (int i = 0; i < 50; ++i) {
    const auto data = random_dataset(80, rng);
    const auto id_params = random_params(ModelFamily::IllnessDeath, rng);
    const ParameterSet cr_params(ModelFamily::CompetingRisks,
                                 {id_params.at(TransitionLabel::FR),
                                  id_params.at(TransitionLabel::FD)});
    const auto id_parts = per_transition_log_likelihood(ModelFamily::IllnessDeath, id_params, data);
    const auto cr_parts =
        per_transition_log_likelihood(ModelFamily::CompetingRisks, cr_params, data);
    CHECK(id_parts.at(TransitionLabel::FR) == cr_parts.at(TransitionLabel::FR));
    CHECK(id_parts.at(TransitionLabel::FD) == cr_parts.at(TransitionLabel::FD));
  }
}

TEST_CASE("exact separability across the two families") {
  Pcg64 rng(103, 0);
  for (int i = 0; i < 100; ++i) {
    const auto data = random_dataset(100, rng);
    const auto id_params = random_params(ModelFamily::IllnessDeath, rng);
    const ParameterSet cr_params(ModelFamily::CompetingRisks,
                                 {id_params.at(TransitionLabel::FR),
                                  id_params.at(TransitionLabel::FD)});
    const double full = log_likelihood(ModelFamily::IllnessDeath, id_params, data);
    const double shared = log_likelihood(ModelFamily::CompetingRisks, cr_params, data);
    const double rd = per_transition_log_likelihood(ModelFamily::IllnessDeath, id_params, data)
                          .at(TransitionLabel::RD);
    CHECK(std::abs(full - (shared + rd)) <= 1e-12);
  }
}

TEST_CASE("more censored exposure lowers the log likelihood") {
  const auto params = unit_exponential_params(ModelFamily::CompetingRisks);
  const CohortDataset shorter({record(1.0, FirstOutcome::Censored)}, 83.4);
  const CohortDataset longer({record(3.0, FirstOutcome::Censored)}, 83.4);
  CHECK(log_likelihood(ModelFamily::CompetingRisks, params, longer) <
        log_likelihood(ModelFamily::CompetingRisks, params, shorter));
}

TEST_CASE("record order does not change the value bit-for-bit") {
  Pcg64 rng(104, 0);
  for (int i = 0; i < 50; ++i) {
    const auto data = random_dataset(50, rng);
    const auto params = random_params(ModelFamily::IllnessDeath, rng);
    const double reference_value = log_likelihood(ModelFamily::IllnessDeath, params, data);

    auto records = data.records();
    // deterministic shuffle
    for (std::size_t k = records.size(); k > 1; --k) {
      std::swap(records[k - 1], records[rng.next_u64() % k]);
    }
    const CohortDataset shuffled(std::move(records), data.age_center());
    CHECK(log_likelihood(ModelFamily::IllnessDeath, params, shuffled) == reference_value);
  }
}
