#include "msbayes/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace msbayes {

void CovariateModel::validate() const {
  if (!(woman_prob >= 0.0 && woman_prob <= 1.0)) {
    throw std::invalid_argument("woman_prob must lie in [0, 1]");
  }
  if (!std::isfinite(age_mean) || !std::isfinite(age_sd) || age_sd < 0.0) {
    throw std::invalid_argument("age distribution requires finite mean and sd >= 0");
  }
  if (!(age_lo <= age_hi)) throw std::invalid_argument("age truncation bounds must be ordered");
}

CovariateModel default_covariate_model() {
  CovariateModel m;
  m.woman_prob = 0.748;
  m.age_mean = 83.4;
  m.age_sd = 6.0;
  m.age_lo = 65.0;
  m.age_hi = 105.0;
  return m;
}

SimulationSpec::SimulationSpec(ModelFamily family_, ParameterSet params, std::size_t n,
                               std::uint64_t seed_)
    : family(family_), true_params(std::move(params)), n_subjects(n), seed(seed_) {}

void SimulationSpec::validate() const {
  if (true_params.family() != family) {
    throw std::invalid_argument("simulation parameter set does not match the family");
  }
  covariates.validate();
  if (!(censor_time > 0.0) || !std::isfinite(censor_time)) {
    throw std::invalid_argument("censor_time must be > 0");
  }
  if (accrual_years.has_value()) {
    if (!(*accrual_years > 0.0) || !(*accrual_years < censor_time)) {
      throw std::invalid_argument("accrual window must satisfy 0 < accrual < censor_time");
    }
  }
  if (!std::isfinite(age_center)) throw std::invalid_argument("age_center must be finite");
}

double event_time_from_exponential(const TransitionParams& tp, const CovariateVector& cov,
                                   double unit_exponential) {
  if (!(unit_exponential >= 0.0)) {
    throw std::invalid_argument("unit exponential draw must be >= 0");
  }
  const double rate = tp.baseline.scale * std::exp(linear_predictor(tp.coeffs, cov));
  return std::pow(unit_exponential / rate, 1.0 / tp.baseline.shape);
}

double draw_event_time(const TransitionParams& tp, const CovariateVector& cov, Pcg64& rng) {
  return event_time_from_exponential(tp, cov, rng.exponential());
}

CohortDataset simulate_cohort(const SimulationSpec& spec) {
  spec.validate();
  std::vector<SubjectRecord> records;
  records.reserve(spec.n_subjects);

  const TransitionParams& fr = spec.true_params.at(TransitionLabel::FR);
  const TransitionParams& fd = spec.true_params.at(TransitionLabel::FD);
  const bool illness_death = spec.family == ModelFamily::IllnessDeath;

  for (std::size_t i = 0; i < spec.n_subjects; ++i) {
    Pcg64 rng(spec.seed, i);
    SubjectRecord r;
    r.id = "S" + std::to_string(i + 1);
    r.woman = rng.bernoulli(spec.covariates.woman_prob) ? 1.0 : 0.0;
    r.age_at_discharge = rng.truncated_normal(spec.covariates.age_mean, spec.covariates.age_sd,
                                              spec.covariates.age_lo, spec.covariates.age_hi);
    const CovariateVector cov(r.woman, r.age_at_discharge - spec.age_center);

    double censor = spec.censor_time;
    if (spec.accrual_years.has_value()) {
      censor = spec.censor_time - rng.uniform(0.0, *spec.accrual_years);
    }

    const double t_fr = draw_event_time(fr, cov, rng);
    const double t_fd = draw_event_time(fd, cov, rng);
    const double first = std::min(t_fr, t_fd);
    if (first >= censor) {
      r.t_first = censor;
      r.first_outcome = FirstOutcome::Censored;
    } else if (t_fr <= t_fd) {  // ties (measure zero) resolve to refracture
      r.t_first = t_fr;
      r.first_outcome = FirstOutcome::Refracture;
      if (illness_death) {
        const TransitionParams& rd = spec.true_params.at(TransitionLabel::RD);
        const double t_rd = draw_event_time(rd, cov, rng);  // reset clock
        PostRefracture post;
        if (t_fr + t_rd < censor) {
          post.t_second = t_rd;
          post.outcome = SecondOutcome::Death;
        } else {
          post.t_second = censor - t_fr;
          post.outcome = SecondOutcome::Censored;
        }
        r.post_refracture = post;
      }
      // the competing-risks family treats refracture as terminal: no follow-up
    } else {
      r.t_first = t_fd;
      r.first_outcome = FirstOutcome::Death;
    }
    records.push_back(std::move(r));
  }

  return CohortDataset(std::move(records), spec.age_center);
}

}  // namespace msbayes
