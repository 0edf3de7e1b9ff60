#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "msbayes/data.hpp"
#include "msbayes/prior.hpp"

namespace msbayes {

/// Chain layout and adaptation settings for the random-walk Metropolis
/// sampler. Proposal covariances adapt during burn-in only and are frozen
/// afterwards; retained draws are the post-burn-in iterations thinned by
/// `thin`.
struct ChainConfig {
  int n_chains = 4;
  int n_iterations = 10000;
  int n_burnin = 5000;
  int thin = 1;
  std::uint64_t seed = 1;
  int adapt_window = 50;        // iterations between proposal updates during burn-in
  double target_accept = 0.234; // per-block target acceptance rate
  double init_step = 0.1;       // initial proposal sd on the transformed scale

  int n_retained() const { return (n_iterations - n_burnin) / thin; }
  void validate() const;
};

/// Log target restricted to one block: implementations return every term of
/// the (unnormalized) log density that depends on the given block, as a
/// function of the full state vector. Terms constant in the block may be
/// omitted.
class BlockTarget {
 public:
  virtual ~BlockTarget() = default;
  virtual double block_log_density(std::size_t block, std::span<const double> state) const = 0;
};

struct BlockLayout {
  std::string name;
  std::size_t offset = 0;  // position of the block inside the state vector
  std::size_t dim = 0;
};

struct ChainResult {
  std::vector<double> draws;        // n_retained x state_dim, row-major
  std::vector<double> acceptance;   // post-burn-in acceptance rate per block
};

/// One adaptive random-walk Metropolis chain over the given blocks. Each
/// iteration proposes a multivariate-normal step per block and accepts by
/// the Metropolis rule; proposal covariances are estimated from the burn-in
/// history and the global scale is steered toward the target acceptance
/// rate, all frozen at the end of burn-in. Bit-for-bit reproducible given
/// (seed, chain_index, config).
ChainResult run_chain(const BlockTarget& target, const std::vector<BlockLayout>& blocks,
                      std::span<const double> init, const ChainConfig& config,
                      std::uint64_t chain_index);

/// Posterior draws on the original parameter scale, chain-major, including
/// any fixed parameters as constant columns.
class PosteriorDraws {
 public:
  ModelFamily family = ModelFamily::CompetingRisks;
  std::vector<std::string> labels;  // parameter names in storage order
  int n_chains = 0;
  int n_retained = 0;
  std::vector<double> values;  // (chain * n_retained + iter) * n_params + param
  ChainConfig config;
  PriorSpec prior;
  double age_center = 0.0;
  std::vector<std::string> block_names;
  std::vector<std::vector<double>> acceptance;  // [chain][block]

  int n_params() const { return static_cast<int>(labels.size()); }
  int total_draws() const { return n_chains * n_retained; }

  double value(int chain, int iter, int param) const {
    return values[(static_cast<std::size_t>(chain) * n_retained + iter) * labels.size() + param];
  }
  int find(const std::string& label) const;

  /// All retained draws of one parameter, chains concatenated.
  std::vector<double> parameter_draws(int param) const;
  /// Per-chain draws of one parameter.
  std::vector<std::vector<double>> parameter_chains(int param) const;

  /// Parameter set at one retained draw (for evaluating functionals).
  ParameterSet parameter_set_at(int chain, int iter) const;
  /// Parameter set ordered by flattened draw index chain*n_retained + iter.
  ParameterSet parameter_set_at(int flat_index) const;
  /// Plugin set at the per-parameter posterior means.
  ParameterSet posterior_mean_params() const;
};

/// Fits the model by adaptive random-walk Metropolis. Sampling runs on
/// (log shape, log scale, beta_sex, beta_age) per transition with the log
/// Jacobian added to the target; each transition is one proposal block.
/// Fixed parameters are excluded from sampling and reported as constant
/// columns. Chains are independent given their (seed, chain index)
/// substreams and run concurrently.
PosteriorDraws sample_posterior(ModelFamily family, const CohortDataset& data,
                                const PriorSpec& prior, const ChainConfig& config);

/// Canonical parameter label, e.g. "alpha_FR", "beta_age_RD".
std::string parameter_label(TransitionLabel label, int index_within_transition);

}  // namespace msbayes
