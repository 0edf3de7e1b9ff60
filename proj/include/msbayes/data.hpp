#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "msbayes/hazard.hpp"

namespace msbayes {

enum class FirstOutcome { Censored, Refracture, Death };
enum class SecondOutcome { Censored, Death };

std::string to_string(FirstOutcome outcome);
std::string to_string(SecondOutcome outcome);
std::optional<FirstOutcome> first_outcome_from(std::string_view text);
std::optional<SecondOutcome> second_outcome_from(std::string_view text);

/// Follow-up after an observed refracture, on the reset clock: t_second is
/// the time from refracture to death or censoring.
struct PostRefracture {
  double t_second = 0.0;
  SecondOutcome outcome = SecondOutcome::Censored;
};

/// One subject's event history. t_first is the time from discharge to the
/// first event or censoring; post_refracture is present exactly when the
/// first outcome is a refracture.
struct SubjectRecord {
  std::string id;
  double woman = 0.0;  // 0 or 1
  double age_at_discharge = 0.0;
  double t_first = 0.0;
  FirstOutcome first_outcome = FirstOutcome::Censored;
  std::optional<PostRefracture> post_refracture;
};

struct ValidationIssue {
  std::size_t record_index = 0;
  std::string id;
  std::string rule;
};

/// Checks every structural rule and returns one issue per violation;
/// an empty result means the records form a valid cohort.
std::vector<ValidationIssue> validate_records(std::span<const SubjectRecord> records);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// Immutable validated record collection plus the age-centering constant.
class CohortDataset {
 public:
  CohortDataset(std::vector<SubjectRecord> records, double age_center);

  const std::vector<SubjectRecord>& records() const { return records_; }
  double age_center() const { return age_center_; }
  std::size_t size() const { return records_.size(); }

  CovariateVector covariates(const SubjectRecord& record) const {
    return CovariateVector(record.woman, record.age_at_discharge - age_center_);
  }

 private:
  std::vector<SubjectRecord> records_;
  double age_center_;
};

/// Validates and assembles a dataset with an explicit centering constant.
/// Throws ValidationError listing every violating record.
CohortDataset validate_dataset(std::vector<SubjectRecord> records, double age_center);

/// Like validate_dataset, but when center is omitted the mean age at
/// discharge over the records is used (error on an empty record list).
CohortDataset center_ages(std::vector<SubjectRecord> records,
                          std::optional<double> center = std::nullopt);

enum class ModelFamily { CompetingRisks, IllnessDeath };

std::string to_string(ModelFamily family);
std::optional<ModelFamily> model_family_from(std::string_view text);

/// The transitions a family models, in canonical order.
std::vector<TransitionLabel> transition_labels(ModelFamily family);

/// One full parameter vector: {FR, FD} for competing risks, {FR, FD, RD}
/// for illness-death. The label set is enforced at construction.
class ParameterSet {
 public:
  ParameterSet(ModelFamily family, std::vector<TransitionParams> transitions);

  ModelFamily family() const { return family_; }
  const std::vector<TransitionParams>& transitions() const { return transitions_; }
  const TransitionParams& at(TransitionLabel label) const;
  bool has(TransitionLabel label) const;

 private:
  ModelFamily family_;
  std::vector<TransitionParams> transitions_;  // canonical FR, FD[, RD] order
};

}  // namespace msbayes
