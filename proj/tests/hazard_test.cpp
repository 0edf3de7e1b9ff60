#include <doctest.h>

#include <cmath>

#include "msbayes/hazard.hpp"
#include "msbayes/reference.hpp"
#include "support.hpp"

using namespace msbayes;
using test_support::random_covariates;
using test_support::random_transition;

TEST_CASE("linear predictor") {
  const CovariateVector woman70(1.0, 70.0 - 83.4);

  CHECK(linear_predictor(RegressionCoefficients(0.0, 0.0), woman70) == 0.0);

  // hand arithmetic on the reference FR coefficients: 0.0254*1 + 0.0244*(-13.4)
  const auto& fr = reference::competing_risks_estimates().at(TransitionLabel::FR);
  CHECK(linear_predictor(fr.coeffs, woman70) == doctest::Approx(-0.30156).epsilon(1e-9));

  // FD: -0.5088*1 + 0.0705*(-13.4)
  const auto& fd = reference::competing_risks_estimates().at(TransitionLabel::FD);
  CHECK(linear_predictor(fd.coeffs, woman70) == doctest::Approx(-1.4535).epsilon(1e-9));
}

TEST_CASE("hazard closed forms") {
  const CovariateVector none(0.0, 0.0);

  const TransitionParams quad(TransitionLabel::FR, WeibullShapeScale(2.0, 1.0),
                              RegressionCoefficients(0.0, 0.0));
  CHECK(hazard_at(quad, none, 3.0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(cumulative_hazard(quad, none, 3.0) == doctest::Approx(9.0).epsilon(1e-12));

  const TransitionParams expo(TransitionLabel::FR, WeibullShapeScale(1.0, 1.0),
                              RegressionCoefficients(0.0, 0.0));
  for (double t : {0.1, 0.5, 1.0, 4.0}) {
    CHECK(hazard_at(expo, none, t) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // reference FD baseline at t=1 for a woman of 70: 0.3310*0.7759*exp(-1.4535)
  const auto& fd = reference::competing_risks_estimates().at(TransitionLabel::FD);
  const CovariateVector woman70(1.0, -13.4);
  CHECK(hazard_at(fd, woman70, 1.0) == doctest::Approx(0.06002).epsilon(2e-4));
  CHECK(cumulative_hazard(fd, woman70, 1.0) == doctest::Approx(0.07737).epsilon(2e-4));
}

TEST_CASE("hazard rejects nonpositive times") {
  const TransitionParams tp(TransitionLabel::FR, WeibullShapeScale(0.8, 0.3),
                            RegressionCoefficients(0.0, 0.0));
  const CovariateVector none(0.0, 0.0);
  CHECK_THROWS_AS(hazard_at(tp, none, 0.0), std::domain_error);
  CHECK_THROWS_AS(hazard_at(tp, none, -1.0), std::domain_error);
  CHECK_THROWS_AS(cumulative_hazard(tp, none, -0.5), std::domain_error);
  CHECK(cumulative_hazard(tp, none, 0.0) == 0.0);
}

TEST_CASE("type invariants") {
  CHECK_THROWS_AS(WeibullShapeScale(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeibullShapeScale(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(WeibullShapeScale(std::nan(""), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(CovariateVector(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CovariateVector(1.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("overall survival") {
  const CovariateVector none(0.0, 0.0);
  const std::vector<TransitionParams> single = {TransitionParams(
      TransitionLabel::FR, WeibullShapeScale(1.0, 1.0), RegressionCoefficients(0.0, 0.0))};
  CHECK(all_causes_survival(single, none, 0.0) == 1.0);
  CHECK(all_causes_survival(single, none, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  // composition of the two reference cumulative hazards for a woman of 70
  const auto params = reference::competing_risks_estimates();
  const CovariateVector woman70(1.0, -13.4);
  CHECK(all_causes_survival(params.transitions(), woman70, 1.0) ==
        doctest::Approx(0.9067).epsilon(2e-4));
}

TEST_CASE("cumulative hazard is zero at origin and nondecreasing") {
  Pcg64 rng(2024, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto tp = random_transition(TransitionLabel::FR, rng);
    const auto cov = random_covariates(rng);
    CHECK(cumulative_hazard(tp, cov, 0.0) == 0.0);
    const double t1 = rng.uniform(0.0, 5.0);
    const double t2 = t1 + rng.uniform(0.0, 5.0);
    CHECK(cumulative_hazard(tp, cov, t1) <= cumulative_hazard(tp, cov, t2));
  }
}

TEST_CASE("hazard matches the derivative of the cumulative hazard") {
  Pcg64 rng(7, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto tp = random_transition(TransitionLabel::FD, rng);
    const auto cov = random_covariates(rng);
    const double t = rng.uniform(0.05, 5.0);
    const double eps = 1e-5 * std::max(t, 0.1);
    const double fd =
        (cumulative_hazard(tp, cov, t + eps) - cumulative_hazard(tp, cov, t - eps)) / (2.0 * eps);
    CHECK(fd == doctest::Approx(hazard_at(tp, cov, t)).epsilon(1e-4));
  }
}

TEST_CASE("proportional hazards: covariate ratio is constant in time") {
  Pcg64 rng(11, 0);
  for (int i = 0; i < 200; ++i) {
    const auto tp = random_transition(TransitionLabel::FR, rng);
    const auto cov1 = random_covariates(rng);
    const auto cov2 = random_covariates(rng);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double t = 0.25; t <= 4.0; t += 0.25) {
      const double ratio = hazard_at(tp, cov1, t) / hazard_at(tp, cov2, t);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK((hi - lo) / hi < 1e-12);
  }
}

TEST_CASE("unit shape reduces to the exponential cumulative hazard") {
  Pcg64 rng(13, 0);
  for (int i = 0; i < 1000; ++i) {
    const double lambda = rng.uniform(0.01, 2.0);
    const TransitionParams tp(TransitionLabel::FR, WeibullShapeScale(1.0, lambda),
                              RegressionCoefficients(rng.uniform(-1.0, 1.0),
                                                     rng.uniform(-0.1, 0.1)));
    const auto cov = random_covariates(rng);
    const double t = rng.uniform(0.0, 6.0);
    const double expected = lambda * std::exp(linear_predictor(tp.coeffs, cov)) * t;
    CHECK(cumulative_hazard(tp, cov, t) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("survival lies in [0,1] and is nonincreasing") {
  Pcg64 rng(17, 0);
  for (int i = 0; i < 1000; ++i) {
    std::vector<TransitionParams> tps = {random_transition(TransitionLabel::FR, rng),
                                         random_transition(TransitionLabel::FD, rng)};
    const auto cov = random_covariates(rng);
    double prev = 1.0;
    for (double t = 0.0; t <= 5.0; t += 0.5) {
      const double s = all_causes_survival(tps, cov, t);
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
      CHECK(s <= prev + 1e-15);
      prev = s;
    }
  }
}
