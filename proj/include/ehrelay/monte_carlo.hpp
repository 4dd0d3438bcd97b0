#ifndef EHRELAY_MONTE_CARLO_HPP
#define EHRELAY_MONTE_CARLO_HPP

#include <cmath>
#include <cstdint>

#include "ehrelay/link_model.hpp"

namespace ehrelay {

/// SplitMix64: a tiny splittable generator. Each Monte Carlo block draws
/// from its own stream derived from the master seed and the block index,
/// which makes estimates bit-identical for any worker count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw on (0, 1]; never zero, so logs are safe.
  double uniform_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Inverse-transform exponential with the given mean.
  double exponential(double mean) { return -mean * std::log(uniform_open()); }

 private:
  std::uint64_t state_;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(trials), unbiased variance
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// One physical-model draw. gamma_sr = gamma_h/(1+i_r) and
/// gamma_rd = w (gamma_h + i_r) by construction.
struct TrialDraw {
  double gamma_h = 0.0;
  double i_r = 0.0;
  double w = 0.0;
  double gamma_sr = 0.0;
  double gamma_rd = 0.0;
};

/// Samples |h|^2, |g|^2 and the |beta_i|^2 from their exponential laws and
/// assembles the protocol-scaled SNR quantities.
TrialDraw sample_trial(const ChannelConfig&, const Protocol&, SplitMix64& rng);

/// Empirical outage probability: indicator mean of min(SNRs) <= gamma_th.
MonteCarloEstimate mc_outage(const ChannelConfig&, const Protocol&,
                             double gamma_th, std::uint64_t trials,
                             std::uint64_t seed, unsigned workers = 0);

/// Empirical ergodic capacity: mean of (1/2) log2(1 + min(SNRs)).
MonteCarloEstimate mc_ergodic(const ChannelConfig&, const Protocol&,
                              std::uint64_t trials, std::uint64_t seed,
                              unsigned workers = 0);

}  // namespace ehrelay

#endif  // EHRELAY_MONTE_CARLO_HPP
