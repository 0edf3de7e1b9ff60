#pragma once

#include <map>

#include "msbayes/data.hpp"

namespace msbayes {

/// Right-censored event-history log-likelihood.
///
/// The likelihood factorizes into one product per transition. Refractures
/// contribute log h_FR(t_first) and deaths log h_FD(t_first); every subject
/// contributes -H_FR(t_first) - H_FD(t_first). Under the illness-death
/// family, refractured subjects additionally contribute, on the reset clock
/// u = t_second, log h_RD(u) for a death and -H_RD(u) always.
///
/// Per-transition terms are summed with a canonical-order compensated scheme,
/// so the value is independent of record order bit-for-bit.
double log_likelihood(ModelFamily family, const ParameterSet& params, const CohortDataset& data);

/// The additive decomposition of log_likelihood by transition. The FR
/// component collects the refracture event terms and every subject's -H_FR;
/// FD likewise; RD collects only the post-refracture terms. Components sum
/// to log_likelihood exactly.
std::map<TransitionLabel, double> per_transition_log_likelihood(ModelFamily family,
                                                                const ParameterSet& params,
                                                                const CohortDataset& data);

}  // namespace msbayes
