#include "msbayes/data.hpp"

#include <algorithm>
#include <cmath>

namespace msbayes {

std::string to_string(FirstOutcome outcome) {
  switch (outcome) {
    case FirstOutcome::Censored: return "censored";
    case FirstOutcome::Refracture: return "refracture";
    case FirstOutcome::Death: return "death";
  }
  return "?";
}

std::string to_string(SecondOutcome outcome) {
  return outcome == SecondOutcome::Death ? "death" : "censored";
}

std::optional<FirstOutcome> first_outcome_from(std::string_view text) {
  if (text == "censored") return FirstOutcome::Censored;
  if (text == "refracture") return FirstOutcome::Refracture;
  if (text == "death") return FirstOutcome::Death;
  return std::nullopt;
}

std::optional<SecondOutcome> second_outcome_from(std::string_view text) {
  if (text == "censored") return SecondOutcome::Censored;
  if (text == "death") return SecondOutcome::Death;
  return std::nullopt;
}

std::vector<ValidationIssue> validate_records(std::span<const SubjectRecord> records) {
  std::vector<ValidationIssue> issues;
  auto add = [&](std::size_t i, const std::string& rule) {
    issues.push_back({i, records[i].id, rule});
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SubjectRecord& r = records[i];
    if (!(std::isfinite(r.t_first) && r.t_first > 0.0)) {
      add(i, "t_first must be > 0");
    }
    if (r.woman != 0.0 && r.woman != 1.0) {
      add(i, "woman indicator must be 0 or 1");
    }
    if (!(std::isfinite(r.age_at_discharge) && r.age_at_discharge >= 0.0)) {
      add(i, "age_at_discharge must be >= 0");
    }
    if (r.first_outcome != FirstOutcome::Refracture && r.post_refracture.has_value()) {
      add(i, "post_refracture present without a refracture outcome");
    }
    if (r.post_refracture.has_value()) {
      const PostRefracture& p = *r.post_refracture;
      if (!(std::isfinite(p.t_second) && p.t_second > 0.0)) {
        add(i, "t_second must be > 0");
      }
    }
  }
  return issues;
}

namespace {

std::string issues_message(const std::vector<ValidationIssue>& issues) {
  std::string msg = "invalid cohort records (" + std::to_string(issues.size()) + " issue";
  if (issues.size() != 1) msg += "s";
  msg += ")";
  const std::size_t shown = std::min<std::size_t>(issues.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    msg += "; record " + std::to_string(issues[i].record_index);
    if (!issues[i].id.empty()) msg += " (" + issues[i].id + ")";
    msg += ": " + issues[i].rule;
  }
  if (issues.size() > shown) msg += "; ...";
  return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::runtime_error(issues_message(issues)), issues_(std::move(issues)) {}

CohortDataset::CohortDataset(std::vector<SubjectRecord> records, double age_center)
    : records_(std::move(records)), age_center_(age_center) {
  if (!std::isfinite(age_center_)) {
    throw std::invalid_argument("age_center must be finite");
  }
  auto issues = validate_records(records_);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

CohortDataset validate_dataset(std::vector<SubjectRecord> records, double age_center) {
  return CohortDataset(std::move(records), age_center);
}

CohortDataset center_ages(std::vector<SubjectRecord> records, std::optional<double> center) {
  if (!center.has_value()) {
    if (records.empty()) {
      throw std::invalid_argument("cannot infer an age center from an empty record list");
    }
    double sum = 0.0, comp = 0.0;
    for (const SubjectRecord& r : records) {
      const double y = r.age_at_discharge - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    center = sum / static_cast<double>(records.size());
  }
  return CohortDataset(std::move(records), *center);
}

std::string to_string(ModelFamily family) {
  return family == ModelFamily::CompetingRisks ? "competing-risks" : "illness-death";
}

std::optional<ModelFamily> model_family_from(std::string_view text) {
  if (text == "cr" || text == "competing-risks" || text == "competing_risks") {
    return ModelFamily::CompetingRisks;
  }
  if (text == "id" || text == "illness-death" || text == "illness_death") {
    return ModelFamily::IllnessDeath;
  }
  return std::nullopt;
}

std::vector<TransitionLabel> transition_labels(ModelFamily family) {
  if (family == ModelFamily::CompetingRisks) {
    return {TransitionLabel::FR, TransitionLabel::FD};
  }
  return {TransitionLabel::FR, TransitionLabel::FD, TransitionLabel::RD};
}

ParameterSet::ParameterSet(ModelFamily family, std::vector<TransitionParams> transitions)
    : family_(family) {
  const auto expected = transition_labels(family);
  transitions_.reserve(expected.size());
  for (TransitionLabel label : expected) {
    auto it = std::find_if(transitions.begin(), transitions.end(),
                           [label](const TransitionParams& tp) { return tp.label == label; });
    if (it == transitions.end()) {
      throw std::invalid_argument("parameter set for " + to_string(family) +
                                  " is missing transition " + to_string(label));
    }
    transitions_.push_back(*it);
  }
  if (transitions.size() != expected.size()) {
    throw std::invalid_argument("parameter set for " + to_string(family) +
                                " has an unexpected transition label");
  }
}

const TransitionParams& ParameterSet::at(TransitionLabel label) const {
  for (const auto& tp : transitions_) {
    if (tp.label == label) return tp;
  }
  throw std::out_of_range("parameter set has no transition " + to_string(label));
}

bool ParameterSet::has(TransitionLabel label) const {
  return std::any_of(transitions_.begin(), transitions_.end(),
                     [label](const TransitionParams& tp) { return tp.label == label; });
}

}  // namespace msbayes
