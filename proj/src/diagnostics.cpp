#include "msbayes/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace msbayes {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SequenceStats {
  std::vector<double> values;
  double mean = 0.0;
  double var = 0.0;  // sample variance, / (L-1)
};

// autocovariance at lag t, normalized by L (biased form)
double autocov(const SequenceStats& s, int lag) {
  const int n = static_cast<int>(s.values.size());
  double sum = 0.0;
  for (int i = 0; i + lag < n; ++i) {
    sum += (s.values[i] - s.mean) * (s.values[i + lag] - s.mean);
  }
  return sum / n;
}

}  // namespace

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

DiagnosticsReport diagnostics(const PosteriorDraws& draws) {
  if (draws.n_chains < 2) throw std::invalid_argument("diagnostics require at least 2 chains");
  if (draws.n_retained < 4) {
    throw std::invalid_argument("diagnostics require at least 4 retained draws per chain");
  }

  DiagnosticsReport report;
  report.block_names = draws.block_names;
  report.acceptance = draws.acceptance;

  const int half = draws.n_retained / 2;
  const int n_params = draws.n_params();

  for (int p = 0; p < n_params; ++p) {
    ParameterDiagnostics diag;
    diag.name = draws.labels[p];

    // split each chain into halves
    std::vector<SequenceStats> seqs;
    seqs.reserve(static_cast<std::size_t>(draws.n_chains) * 2);
    for (int c = 0; c < draws.n_chains; ++c) {
      for (int part = 0; part < 2; ++part) {
        SequenceStats s;
        s.values.reserve(half);
        for (int i = 0; i < half; ++i) s.values.push_back(draws.value(c, part * half + i, p));
        double sum = 0.0;
        for (double v : s.values) sum += v;
        s.mean = sum / half;
        double ss = 0.0;
        for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
        s.var = ss / (half - 1);
        seqs.push_back(std::move(s));
      }
    }
    const int m = static_cast<int>(seqs.size());
    const int len = half;

    double w = 0.0;
    for (const auto& s : seqs) w += s.var;
    w /= m;

    double grand = 0.0;
    for (const auto& s : seqs) grand += s.mean;
    grand /= m;
    double between = 0.0;
    for (const auto& s : seqs) between += (s.mean - grand) * (s.mean - grand);
    between /= (m - 1);  // = B / L

    if (!(w > 0.0)) {
      diag.constant = true;
      diag.rhat = kNaN;
      diag.ess = kNaN;
      diag.mcse = kNaN;
      report.parameters.push_back(std::move(diag));
      continue;
    }

    const double var_plus = w * (len - 1) / len + between;
    diag.rhat = std::sqrt(var_plus / w);

    // ESS with Geyer initial-positive-sequence truncation over paired lags
    auto rho = [&](int lag) {
      double acov = 0.0;
      for (const auto& s : seqs) acov += autocov(s, lag);
      acov /= m;
      return 1.0 - (w - acov) / var_plus;
    };
    double tau = 1.0;  // rho_0 contribution of the pairing below
    double rho_even = 1.0;
    double rho_odd = rho(1);
    tau = rho_even + rho_odd;
    int lag = 1;
    while (lag + 2 < len) {
      rho_even = rho(lag + 1);
      rho_odd = rho(lag + 2);
      if (rho_even + rho_odd <= 0.0) break;
      tau += rho_even + rho_odd;
      lag += 2;
    }
    tau = 2.0 * tau - 1.0;
    tau = std::max(tau, 1e-12);

    const double total = static_cast<double>(m) * len;
    diag.ess = std::min(total / tau, static_cast<double>(draws.total_draws()));

    const auto all = draws.parameter_draws(p);
    double mean_all = 0.0;
    for (double v : all) mean_all += v;
    mean_all /= all.size();
    double ss_all = 0.0;
    for (double v : all) ss_all += (v - mean_all) * (v - mean_all);
    const double sd_all = std::sqrt(ss_all / (all.size() - 1));
    diag.mcse = sd_all / std::sqrt(diag.ess);

    report.parameters.push_back(std::move(diag));
  }
  return report;
}

std::vector<ParameterSummary> summarize_draws(const PosteriorDraws& draws) {
  if (draws.total_draws() < 1) throw std::invalid_argument("no draws to summarize");
  std::vector<ParameterSummary> out;
  out.reserve(draws.labels.size());
  for (int p = 0; p < draws.n_params(); ++p) {
    ParameterSummary s;
    s.name = draws.labels[p];
    auto vals = draws.parameter_draws(p);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    s.mean = mean;
    s.sd = vals.size() > 1 ? std::sqrt(ss / (vals.size() - 1)) : 0.0;
    s.q025 = sample_quantile(vals, 0.025);
    s.q500 = sample_quantile(vals, 0.5);
    s.q975 = sample_quantile(vals, 0.975);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace msbayes
