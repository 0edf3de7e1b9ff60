#pragma once

#include <string>
#include <vector>

#include "msbayes/mcmc.hpp"

namespace msbayes {

struct ParameterDiagnostics {
  std::string name;
  double rhat = 0.0;   // split potential scale reduction; NaN when flagged
  double ess = 0.0;    // effective sample size, capped at the retained total
  double mcse = 0.0;   // posterior sd / sqrt(ess)
  bool constant = false;  // zero-variance chain: R-hat undefined
};

struct DiagnosticsReport {
  std::vector<ParameterDiagnostics> parameters;
  std::vector<std::string> block_names;
  std::vector<std::vector<double>> acceptance;  // [chain][block]
};

/// Split R-hat, autocorrelation ESS with the initial-positive-sequence
/// truncation, and Monte-Carlo standard errors. Requires at least two
/// chains with at least four retained draws each. Constant chains are
/// flagged rather than raising.
DiagnosticsReport diagnostics(const PosteriorDraws& draws);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q500 = 0.0;
  double q975 = 0.0;
};

/// Posterior mean, sd and 2.5/50/97.5% quantiles per parameter, on the
/// original parameter scale.
std::vector<ParameterSummary> summarize_draws(const PosteriorDraws& draws);

/// Linear-interpolation sample quantile (type 7). Sorts a copy.
double sample_quantile(std::vector<double> values, double q);

}  // namespace msbayes
