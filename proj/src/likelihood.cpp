#include "msbayes/likelihood.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace msbayes {

namespace {

// Kahan summation over value-sorted terms: the result depends only on the
// multiset of terms, not on the order records arrived in.
double canonical_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0, comp = 0.0;
  for (double x : terms) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double first_transition_component(TransitionLabel label, const TransitionParams& tp,
                                  const CohortDataset& data) {
  std::vector<double> terms;
  terms.reserve(data.size() * 2);
  const FirstOutcome event_outcome =
      label == TransitionLabel::FR ? FirstOutcome::Refracture : FirstOutcome::Death;
  for (const SubjectRecord& r : data.records()) {
    const CovariateVector cov = data.covariates(r);
    if (r.first_outcome == event_outcome) {
      terms.push_back(log_hazard_at(tp, cov, r.t_first));
    }
    terms.push_back(-cumulative_hazard(tp, cov, r.t_first));
  }
  return canonical_sum(terms);
}

double post_refracture_component(const TransitionParams& tp, const CohortDataset& data) {
  std::vector<double> terms;
  for (const SubjectRecord& r : data.records()) {
    if (!r.post_refracture.has_value()) continue;
    const CovariateVector cov = data.covariates(r);
    const PostRefracture& p = *r.post_refracture;
    if (p.outcome == SecondOutcome::Death) {
      terms.push_back(log_hazard_at(tp, cov, p.t_second));
    }
    terms.push_back(-cumulative_hazard(tp, cov, p.t_second));
  }
  return canonical_sum(terms);
}

}  // namespace

std::map<TransitionLabel, double> per_transition_log_likelihood(ModelFamily family,
                                                                const ParameterSet& params,
                                                                const CohortDataset& data) {
  if (params.family() != family) {
    throw std::invalid_argument("parameter set family does not match the requested family");
  }
  std::map<TransitionLabel, double> components;
  components[TransitionLabel::FR] =
      first_transition_component(TransitionLabel::FR, params.at(TransitionLabel::FR), data);
  components[TransitionLabel::FD] =
      first_transition_component(TransitionLabel::FD, params.at(TransitionLabel::FD), data);
  if (family == ModelFamily::IllnessDeath) {
    components[TransitionLabel::RD] =
        post_refracture_component(params.at(TransitionLabel::RD), data);
  }
  return components;
}

double log_likelihood(ModelFamily family, const ParameterSet& params, const CohortDataset& data) {
  const auto components = per_transition_log_likelihood(family, params, data);
  // combine in canonical label order so the total equals the sum of the
  // reported components exactly
  double total = 0.0;
  for (TransitionLabel label : transition_labels(family)) total += components.at(label);
  return total;
}

}  // namespace msbayes
