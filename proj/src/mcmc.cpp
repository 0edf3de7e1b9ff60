#include "msbayes/mcmc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <thread>

#include "msbayes/quadrature.hpp"  // NumericalError
#include "msbayes/rng.hpp"

namespace msbayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// bound on the transformed (log) shape/scale coordinates; beyond it the
// likelihood arithmetic can produce spurious +inf from overflowing powers
constexpr double kLogBound = 200.0;

// Welford running mean/covariance for a small block.
struct RunningCov {
  int dim = 0;
  long count = 0;
  std::vector<double> mean;
  std::vector<double> m2;  // dim x dim, row-major

  explicit RunningCov(int d) : dim(d), mean(d, 0.0), m2(d * d, 0.0) {}

  void add(std::span<const double> x) {
    ++count;
    std::array<double, 8> delta{};
    for (int i = 0; i < dim; ++i) {
      delta[i] = x[i] - mean[i];
      mean[i] += delta[i] / count;
    }
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        m2[i * dim + j] += delta[i] * (x[j] - mean[j]);
      }
    }
  }

  std::vector<double> covariance() const {
    std::vector<double> cov(dim * dim, 0.0);
    if (count > 1) {
      for (int i = 0; i < dim * dim; ++i) cov[i] = m2[i] / (count - 1);
    }
    return cov;
  }
};

// Lower Cholesky of a small SPD matrix; returns false when not positive
// definite.
bool cholesky(std::vector<double>& a, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s)) return false;
        a[i * n + i] = std::sqrt(s);
      } else {
        a[i * n + j] = s / a[j * n + j];
      }
    }
    for (int j = i + 1; j < n; ++j) a[i * n + j] = 0.0;
  }
  return true;
}

struct BlockState {
  BlockLayout layout;
  std::vector<double> chol;  // proposal lower Cholesky, dim x dim
  RunningCov running;
  double rm_log_scale = 0.0;
  bool cov_active = false;
  int windows_done = 0;
  long window_accepts = 0;
  long window_proposals = 0;
  long post_accepts = 0;
  long post_proposals = 0;
  double cached_logp = 0.0;

  BlockState(const BlockLayout& l, double init_step)
      : layout(l), chol(l.dim * l.dim, 0.0), running(static_cast<int>(l.dim)) {
    for (std::size_t i = 0; i < l.dim; ++i) chol[i * l.dim + i] = init_step;
  }

  // called once per adaptation window during burn-in
  void adapt(double rate, double target, double init_step) {
    const int d = static_cast<int>(layout.dim);
    if (!cov_active && running.count >= 10L * d) {
      // the empirical covariance becomes the proposal basis; restart the
      // scale schedule so it can correct the new proposal size quickly
      cov_active = true;
      windows_done = 0;
      rm_log_scale = 0.0;
    }
    ++windows_done;
    rm_log_scale += (rate - target) / std::sqrt(static_cast<double>(windows_done));
    const double mult = std::exp(rm_log_scale);
    if (cov_active) {
      std::vector<double> cov = running.covariance();
      for (int i = 0; i < d; ++i) cov[i * d + i] += 1e-9;
      if (cholesky(cov, d)) {
        const double s = 2.38 / std::sqrt(static_cast<double>(d)) * mult;
        for (double& v : cov) v *= s;
        chol = std::move(cov);
        return;
      }
      cov_active = false;
    }
    std::fill(chol.begin(), chol.end(), 0.0);
    for (int i = 0; i < d; ++i) chol[i * d + i] = init_step * mult;
  }
};

}  // namespace

void ChainConfig::validate() const {
  if (n_chains < 1) throw std::invalid_argument("n_chains must be >= 1");
  if (n_iterations < 1) throw std::invalid_argument("n_iterations must be >= 1");
  if (n_burnin < 0 || n_burnin >= n_iterations) {
    throw std::invalid_argument("n_burnin must satisfy 0 <= n_burnin < n_iterations");
  }
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (n_retained() < 1) throw std::invalid_argument("configuration retains zero draws");
  if (adapt_window < 1) throw std::invalid_argument("adapt_window must be >= 1");
  if (!(target_accept > 0.0 && target_accept < 1.0)) {
    throw std::invalid_argument("target_accept must lie in (0, 1)");
  }
  if (!(init_step > 0.0) || !std::isfinite(init_step)) {
    throw std::invalid_argument("init_step must be > 0");
  }
}

ChainResult run_chain(const BlockTarget& target, const std::vector<BlockLayout>& blocks,
                      std::span<const double> init, const ChainConfig& config,
                      std::uint64_t chain_index) {
  config.validate();
  if (blocks.empty()) throw std::invalid_argument("run_chain requires at least one block");

  std::size_t dim = 0;
  for (const auto& b : blocks) {
    if (b.dim == 0 || b.dim > 8) {
      throw std::invalid_argument("block dimension must be between 1 and 8");
    }
    dim = std::max(dim, b.offset + b.dim);
  }
  if (init.size() != dim) throw std::invalid_argument("initial state has the wrong dimension");

  Pcg64 rng(config.seed, chain_index);
  std::vector<double> state(init.begin(), init.end());
  std::vector<BlockState> samplers;
  samplers.reserve(blocks.size());
  for (const auto& b : blocks) samplers.emplace_back(b, config.init_step);

  double initial_total = 0.0;
  for (auto& s : samplers) {
    s.cached_logp = target.block_log_density(&s - samplers.data(), state);
    initial_total += s.cached_logp;
  }
  if (!(initial_total > kNegInf)) {
    throw NumericalError("log posterior is -inf at the chain initial point");
  }

  ChainResult result;
  result.draws.reserve(static_cast<std::size_t>(config.n_retained()) * dim);
  result.acceptance.assign(blocks.size(), 0.0);

  std::vector<double> proposal(dim, 0.0);
  std::vector<double> step(8, 0.0);
  bool any_finite_proposal = false;
  long initial_inf_streak = 0;

  for (int iter = 1; iter <= config.n_iterations; ++iter) {
    const bool burnin = iter <= config.n_burnin;
    for (std::size_t bi = 0; bi < samplers.size(); ++bi) {
      BlockState& bs = samplers[bi];
      const std::size_t off = bs.layout.offset;
      const std::size_t d = bs.layout.dim;

      for (std::size_t i = 0; i < d; ++i) step[i] = rng.normal();
      std::copy(state.begin(), state.end(), proposal.begin());
      for (std::size_t i = 0; i < d; ++i) {
        double dx = 0.0;
        for (std::size_t j = 0; j <= i; ++j) dx += bs.chol[i * d + j] * step[j];
        proposal[off + i] += dx;
      }

      const double logp_new = target.block_log_density(bi, proposal);
      if (logp_new > kNegInf) {
        any_finite_proposal = true;
      } else if (!any_finite_proposal) {
        // every proposal from the initial point has had zero density
        if (++initial_inf_streak >= 1000) {
          throw NumericalError(
              "divergent target: log posterior is -inf at every proposal from the initial point");
        }
      }

      const double log_u = std::log(rng.uniform_pos());
      const bool accept = logp_new - bs.cached_logp > log_u;
      if (accept) {
        std::copy(proposal.begin() + off, proposal.begin() + off + d, state.begin() + off);
        bs.cached_logp = logp_new;
      }

      if (burnin) {
        ++bs.window_proposals;
        bs.window_accepts += accept ? 1 : 0;
        // the first half of burn-in is a transient; keep it out of the
        // covariance estimate
        if (2 * iter > config.n_burnin) {
          bs.running.add(std::span<const double>(state).subspan(off, d));
        }
        if (iter % config.adapt_window == 0) {
          const double rate =
              static_cast<double>(bs.window_accepts) / static_cast<double>(bs.window_proposals);
          bs.adapt(rate, config.target_accept, config.init_step);
          bs.window_accepts = bs.window_proposals = 0;
        }
      } else {
        ++bs.post_proposals;
        bs.post_accepts += accept ? 1 : 0;
      }
    }
    if (!burnin && (iter - config.n_burnin) % config.thin == 0 &&
        static_cast<int>(result.draws.size() / dim) < config.n_retained()) {
      result.draws.insert(result.draws.end(), state.begin(), state.end());
    }
  }

  for (std::size_t bi = 0; bi < samplers.size(); ++bi) {
    const BlockState& bs = samplers[bi];
    result.acceptance[bi] =
        bs.post_proposals > 0
            ? static_cast<double>(bs.post_accepts) / static_cast<double>(bs.post_proposals)
            : 0.0;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Model target: per-transition sufficient statistics
// ---------------------------------------------------------------------------

namespace {

// Cached design of one transition. The log likelihood reduces to
//   d*(log a + log l) + (a-1)*S_logt + bs*S_w + ba*S_x - l * sum_i exp(a*logt_i + bs*w_i + ba*x_i)
// which needs one exp per subject at risk per evaluation.
struct TransitionData {
  std::vector<double> log_t, woman, age;
  double n_events = 0.0;
  double sum_logt_events = 0.0;
  double sum_woman_events = 0.0;
  double sum_age_events = 0.0;
  double exposure = 0.0;

  void add(double t, double w, double x, bool event) {
    log_t.push_back(std::log(t));
    woman.push_back(w);
    age.push_back(x);
    exposure += t;
    if (event) {
      n_events += 1.0;
      sum_logt_events += std::log(t);
      sum_woman_events += w;
      sum_age_events += x;
    }
  }

  double loglik(double la, double ll, double bs, double ba) const {
    const double alpha = std::exp(la);
    const double lambda = std::exp(ll);
    double cum = 0.0;
    const std::size_t n = log_t.size();
    for (std::size_t i = 0; i < n; ++i) {
      cum += std::exp(alpha * log_t[i] + bs * woman[i] + ba * age[i]);
    }
    return n_events * (la + ll) + (alpha - 1.0) * sum_logt_events + bs * sum_woman_events +
           ba * sum_age_events - lambda * cum;
  }
};

TransitionData build_transition_data(TransitionLabel label, const CohortDataset& data) {
  TransitionData td;
  if (label == TransitionLabel::RD) {
    for (const SubjectRecord& r : data.records()) {
      if (!r.post_refracture.has_value()) continue;
      const CovariateVector cov = data.covariates(r);
      td.add(r.post_refracture->t_second, cov.woman, cov.age_centered,
             r.post_refracture->outcome == SecondOutcome::Death);
    }
  } else {
    const FirstOutcome event_outcome =
        label == TransitionLabel::FR ? FirstOutcome::Refracture : FirstOutcome::Death;
    for (const SubjectRecord& r : data.records()) {
      const CovariateVector cov = data.covariates(r);
      td.add(r.t_first, cov.woman, cov.age_centered, r.first_outcome == event_outcome);
    }
  }
  return td;
}

// parameter index within a transition: 0 alpha, 1 lambda, 2 beta_sex, 3 beta_age
struct ModelBlock {
  TransitionLabel label;
  const TransitionData* data = nullptr;
  const TransitionPriors* priors = nullptr;
  std::array<double, 4> base{};       // transformed values of fixed parameters
  std::vector<int> sampled;           // parameter indices present in the state
};

const ParameterPrior& prior_of(const TransitionPriors& priors, int param) {
  switch (param) {
    case 0: return priors.shape;
    case 1: return priors.scale;
    case 2: return priors.beta_sex;
    default: return priors.beta_age;
  }
}

class ModelTarget : public BlockTarget {
 public:
  std::vector<ModelBlock> blocks;
  std::vector<BlockLayout> layouts;

  double block_log_density(std::size_t block, std::span<const double> state) const override {
    const ModelBlock& mb = blocks[block];
    const BlockLayout& layout = layouts[block];
    std::array<double, 4> v = mb.base;  // (log alpha, log lambda, beta_sex, beta_age)
    for (std::size_t i = 0; i < mb.sampled.size(); ++i) {
      v[mb.sampled[i]] = state[layout.offset + i];
    }
    for (int p : mb.sampled) {
      if (p <= 1 && std::abs(v[p]) > kLogBound) return kNegInf;
    }
    double logp = mb.data->loglik(v[0], v[1], v[2], v[3]);
    if (!(logp > kNegInf)) return kNegInf;
    for (int p : mb.sampled) {
      const ParameterPrior& pr = prior_of(*mb.priors, p);
      if (p <= 1) {
        // gamma prior on the original scale plus the log Jacobian of exp
        logp += pr.log_density(std::exp(v[p])) + v[p];
      } else {
        logp += pr.log_density(v[p]);
      }
    }
    return logp;
  }
};

}  // namespace

std::string parameter_label(TransitionLabel label, int index_within_transition) {
  static const char* names[4] = {"alpha", "lambda", "beta_sex", "beta_age"};
  return std::string(names[index_within_transition]) + "_" + to_string(label);
}

int PosteriorDraws::find(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  throw std::out_of_range("no parameter named " + label);
}

std::vector<double> PosteriorDraws::parameter_draws(int param) const {
  std::vector<double> out;
  out.reserve(total_draws());
  for (int c = 0; c < n_chains; ++c) {
    for (int i = 0; i < n_retained; ++i) out.push_back(value(c, i, param));
  }
  return out;
}

std::vector<std::vector<double>> PosteriorDraws::parameter_chains(int param) const {
  std::vector<std::vector<double>> out(n_chains);
  for (int c = 0; c < n_chains; ++c) {
    out[c].reserve(n_retained);
    for (int i = 0; i < n_retained; ++i) out[c].push_back(value(c, i, param));
  }
  return out;
}

ParameterSet PosteriorDraws::parameter_set_at(int chain, int iter) const {
  std::vector<TransitionParams> tps;
  int p = 0;
  for (TransitionLabel label : transition_labels(family)) {
    const double alpha = value(chain, iter, p++);
    const double lambda = value(chain, iter, p++);
    const double bs = value(chain, iter, p++);
    const double ba = value(chain, iter, p++);
    tps.emplace_back(label, WeibullShapeScale(alpha, lambda), RegressionCoefficients(bs, ba));
  }
  return ParameterSet(family, std::move(tps));
}

ParameterSet PosteriorDraws::parameter_set_at(int flat_index) const {
  return parameter_set_at(flat_index / n_retained, flat_index % n_retained);
}

ParameterSet PosteriorDraws::posterior_mean_params() const {
  std::vector<TransitionParams> tps;
  int p = 0;
  auto mean_of = [&](int param) {
    double sum = 0.0;
    for (int c = 0; c < n_chains; ++c) {
      for (int i = 0; i < n_retained; ++i) sum += value(c, i, param);
    }
    return sum / total_draws();
  };
  for (TransitionLabel label : transition_labels(family)) {
    const double alpha = mean_of(p++);
    const double lambda = mean_of(p++);
    const double bs = mean_of(p++);
    const double ba = mean_of(p++);
    tps.emplace_back(label, WeibullShapeScale(alpha, lambda), RegressionCoefficients(bs, ba));
  }
  return ParameterSet(family, std::move(tps));
}

PosteriorDraws sample_posterior(ModelFamily family, const CohortDataset& data,
                                const PriorSpec& prior, const ChainConfig& config) {
  config.validate();
  prior.validate(family);

  const auto labels = transition_labels(family);
  std::vector<TransitionData> transition_data;
  transition_data.reserve(labels.size());
  for (TransitionLabel label : labels) {
    transition_data.push_back(build_transition_data(label, data));
  }

  ModelTarget target;
  std::vector<double> init;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const TransitionPriors& priors = prior.at(labels[t]);
    ModelBlock mb;
    mb.label = labels[t];
    mb.data = &transition_data[t];
    mb.priors = &priors;
    const TransitionData& td = transition_data[t];
    const double lambda_hat =
        std::max(td.n_events, 0.5) / std::max(td.exposure, 1e-12);
    const std::array<double, 4> start = {0.0, std::log(lambda_hat), 0.0, 0.0};
    for (int p = 0; p < 4; ++p) {
      const ParameterPrior& pp = prior_of(priors, p);
      if (pp.is_fixed()) {
        mb.base[p] = p <= 1 ? std::log(*pp.fixed) : *pp.fixed;
      } else {
        mb.sampled.push_back(p);
      }
    }
    if (mb.sampled.empty()) continue;  // fully fixed transition
    BlockLayout layout;
    layout.name = to_string(labels[t]);
    layout.offset = init.size();
    layout.dim = mb.sampled.size();
    for (int p : mb.sampled) init.push_back(start[p]);
    target.blocks.push_back(std::move(mb));
    target.layouts.push_back(std::move(layout));
  }
  if (target.blocks.empty()) {
    throw std::invalid_argument("all parameters are fixed; nothing to sample");
  }

  // overdispersed starts: chain-indexed Gaussian jitter on the transformed scale
  std::vector<std::vector<double>> chain_inits(config.n_chains, init);
  for (int c = 0; c < config.n_chains; ++c) {
    Pcg64 jitter_rng(config.seed, 0x100000000ULL + static_cast<std::uint64_t>(c));
    for (double& v : chain_inits[c]) v += 0.1 * jitter_rng.normal();
  }

  std::vector<ChainResult> chain_results(config.n_chains);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run_one = [&](int c) {
    try {
      chain_results[c] = run_chain(target, target.layouts, chain_inits[c], config,
                                   static_cast<std::uint64_t>(c));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  {
    std::vector<std::thread> threads;
    threads.reserve(config.n_chains);
    for (int c = 0; c < config.n_chains; ++c) threads.emplace_back(run_one, c);
    for (auto& th : threads) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  PosteriorDraws draws;
  draws.family = family;
  draws.config = config;
  draws.prior = prior;
  draws.age_center = data.age_center();
  draws.n_chains = config.n_chains;
  draws.n_retained = config.n_retained();
  for (TransitionLabel label : labels) {
    for (int p = 0; p < 4; ++p) draws.labels.push_back(parameter_label(label, p));
  }
  for (const auto& layout : target.layouts) draws.block_names.push_back(layout.name);

  draws.values.resize(static_cast<std::size_t>(draws.total_draws()) * draws.labels.size());
  const std::size_t state_dim = init.size();
  for (int c = 0; c < config.n_chains; ++c) {
    draws.acceptance.push_back(chain_results[c].acceptance);
    for (int i = 0; i < draws.n_retained; ++i) {
      const double* row = chain_results[c].draws.data() + static_cast<std::size_t>(i) * state_dim;
      std::size_t out =
          (static_cast<std::size_t>(c) * draws.n_retained + i) * draws.labels.size();
      std::size_t param = 0;
      std::size_t block_index = 0;
      for (std::size_t t = 0; t < labels.size(); ++t) {
        const TransitionPriors& priors = prior.at(labels[t]);
        const bool has_block = block_index < target.blocks.size() &&
                               target.blocks[block_index].label == labels[t];
        std::size_t k = 0;
        for (int p = 0; p < 4; ++p, ++param) {
          const ParameterPrior& pp = prior_of(priors, p);
          double v;
          if (pp.is_fixed()) {
            v = *pp.fixed;
          } else {
            const double raw = row[target.layouts[block_index].offset + k];
            v = p <= 1 ? std::exp(raw) : raw;
            ++k;
          }
          draws.values[out + param] = v;
        }
        if (has_block && k > 0) ++block_index;
      }
    }
  }
  return draws;
}

}  // namespace msbayes
