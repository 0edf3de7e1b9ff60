#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msbayes/diagnostics.hpp"
#include "msbayes/mcmc.hpp"
#include "msbayes/outcomes.hpp"

namespace msbayes {

/// Malformed input file (missing columns, unparseable rows). Messages carry
/// 1-based line numbers.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `# key: value` comment lines written before every emitted header row.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest exact decimal representation (round-trips bit-for-bit).
std::string format_double(double x);
/// Fixed-point with the given number of decimals (report output).
std::string format_fixed(double x, int decimals);

/// Reads the cohort CSV (columns id, sex, age, t_first, first_outcome,
/// t_second, second_outcome). Ages are centered at `age_center` when given,
/// otherwise at the dataset mean. Structural violations and malformed rows
/// raise CsvError/ValidationError naming the offending lines; non-fatal
/// notes (e.g. an empty file) are appended to `warnings` when provided.
CohortDataset read_cohort_csv(const std::string& path, std::optional<double> age_center,
                              std::vector<std::string>* warnings = nullptr);

void write_cohort_csv(const std::string& path, const CohortDataset& data,
                      const Metadata& metadata);

void write_draws_csv(const std::string& path, const PosteriorDraws& draws,
                     const Metadata& metadata);
PosteriorDraws read_draws_csv(const std::string& path);

void write_summary_csv(const std::string& path, const std::vector<ParameterSummary>& rows,
                       const Metadata& metadata);
void write_diagnostics_csv(const std::string& path, const DiagnosticsReport& report,
                           const Metadata& metadata);
void write_acceptance_csv(const std::string& path, const DiagnosticsReport& report,
                          const Metadata& metadata);
void write_incidence_csv(const std::string& path, const std::vector<IncidenceCell>& cells,
                         const Metadata& metadata);
void write_curve_csv(const std::string& path, const CurveEstimate& curve,
                     const Metadata& metadata);
void write_decompose_csv(const std::string& path, const OccupancyDecomposition& rows,
                         const Metadata& metadata);

struct CompareRow {
  std::string parameter;
  double cr_mean = 0.0, cr_sd = 0.0, cr_mcse = 0.0;
  double id_mean = 0.0, id_sd = 0.0, id_mcse = 0.0;
  double abs_diff = 0.0;
  double diff_over_mcse = 0.0;  // |diff| / sqrt(cr_mcse^2 + id_mcse^2)
};

void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows,
                       const Metadata& metadata);

/// Serialized prior, one clause per parameter ("alpha_FR=gamma(0.01,0.01); ...").
std::string describe_prior(const PriorSpec& prior, ModelFamily family);
PriorSpec parse_prior_description(const std::string& text, ModelFamily family);

}  // namespace msbayes
