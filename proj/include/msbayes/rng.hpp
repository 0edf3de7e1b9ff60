#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace msbayes {

/// pcg64 (PCG XSL-RR 128/64) with independent substreams.
///
/// Every stochastic component of the library derives its generator from a
/// 64-bit user seed plus a stream index (chain index, subject index), so
/// results are reproducible bit-for-bit regardless of execution order or
/// threading. The generator name and stream scheme are recorded in output
/// metadata.
class Pcg64 {
 public:
  Pcg64(std::uint64_t seed, std::uint64_t stream) {
    // setseq variant: the increment selects the stream, the state is seeded
    // through splitmix64 so that nearby seeds give unrelated states.
    inc_ = (static_cast<u128>(splitmix64(stream)) << 64 | splitmix64(stream + 0x9e3779b97f4a7c15ULL));
    inc_ = (inc_ << 1) | 1u;
    state_ = 0;
    next_u64();
    state_ += (static_cast<u128>(splitmix64(seed)) << 64 | splitmix64(seed + 0x9e3779b97f4a7c15ULL));
    next_u64();
  }

  std::uint64_t next_u64() {
    const u128 old = state_;
    state_ = old * kMultiplier + inc_;
    const auto xored = static_cast<std::uint64_t>((old >> 64) ^ old);
    const auto rot = static_cast<unsigned>(old >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  /// Uniform on (0, 1], 53-bit resolution. Never returns 0, so logs are safe.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes exactly two 64-bit words.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Unit exponential, -log U with U in (0, 1].
  double exponential() { return -std::log(uniform_pos()); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Normal(mean, sd) truncated to [lo, hi] by rejection. A degenerate sd
  /// yields the clamped mean; a bound configuration with negligible mass is
  /// cut off after a fixed number of attempts and clamped.
  double truncated_normal(double mean, double sd, double lo, double hi) {
    if (sd <= 0.0) return clamp(mean, lo, hi);
    for (int i = 0; i < 100000; ++i) {
      const double x = normal(mean, sd);
      if (x >= lo && x <= hi) return x;
    }
    return clamp(mean, lo, hi);
  }

  static std::string algorithm_name() { return "pcg64-xsl-rr-128-64 (setseq substreams)"; }

 private:
  using u128 = unsigned __int128;
  static constexpr u128 kMultiplier =
      (static_cast<u128>(2549297995355413924ULL) << 64) | 4865540595714422341ULL;

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static double clamp(double x, double lo, double hi) {
    return x < lo ? lo : (x > hi ? hi : x);
  }

  u128 state_ = 0;
  u128 inc_ = 1;
};

}  // namespace msbayes
