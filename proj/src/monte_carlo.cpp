#include "ehrelay/monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ehrelay {
namespace {

// Fixed block size: the trial-to-block assignment must not depend on the
// worker count, or reproducibility across chunk counts is lost.
constexpr std::uint64_t kBlockSize = 1u << 16;

std::uint64_t block_seed(std::uint64_t master, std::uint64_t block) {
  // The raw stride master + GOLDEN*(b+1) must be avalanched: SplitMix64
  // advances its state by the same stride, so unscrambled block seeds
  // would make adjacent blocks replay one shifted state sequence.
  SplitMix64 scrambler(master + 0x9E3779B97F4A7C15ULL * (block + 1));
  return scrambler.next();
}

struct BlockSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Protocol-resolved sampler; draw order is |h|^2, |g|^2, then the
// interferer gains, so a TrialDraw consumes a fixed number of variates.
struct TrialSampler {
  double gbar_h;
  double gbar_g;
  std::vector<double> mu;

  TrialSampler(const ChannelConfig& cfg, const Protocol& proto) {
    EffectiveScales s = effective_scales(cfg, proto);
    gbar_h = s.gbar_h;
    gbar_g = s.gbar_g;
    mu = std::move(s.mu);
  }

  TrialDraw operator()(SplitMix64& rng) const {
    TrialDraw d;
    d.gamma_h = rng.exponential(gbar_h);
    d.w = rng.exponential(gbar_g);  // mean 0 (no harvesting) draws exact zeros
    d.i_r = 0.0;
    for (double m : mu) d.i_r += rng.exponential(m);
    d.gamma_sr = d.gamma_h / (1.0 + d.i_r);
    d.gamma_rd = d.w * (d.gamma_h + d.i_r);
    return d;
  }
};

template <class PerTrial>
MonteCarloEstimate run_blocks(const ChannelConfig& cfg, const Protocol& proto,
                              std::uint64_t trials, std::uint64_t seed,
                              unsigned workers, PerTrial&& per_trial) {
  if (trials < 1) throw std::invalid_argument("monte carlo: trials must be >= 1");
  const TrialSampler sampler(cfg, proto);

  const std::uint64_t n_blocks = (trials + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSums> blocks(n_blocks);

  auto run_block = [&](std::uint64_t b) {
    SplitMix64 rng(block_seed(seed, b));
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t count = std::min(kBlockSize, trials - begin);
    BlockSums acc;
    for (std::uint64_t t = 0; t < count; ++t) {
      const double v = per_trial(sampler(rng));
      acc.sum += v;
      acc.sum_sq += v * v;
    }
    blocks[b] = acc;
  };

  unsigned n_workers = workers != 0 ? workers : std::thread::hardware_concurrency();
  if (n_workers == 0) n_workers = 1;
  n_workers = static_cast<unsigned>(
      std::min<std::uint64_t>(n_workers, n_blocks));

  if (n_workers <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next.fetch_add(1); b < n_blocks;
             b = next.fetch_add(1))
          run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Reduce in block order: the result is independent of scheduling.
  double sum = 0.0, sum_sq = 0.0;
  for (const BlockSums& b : blocks) {
    sum += b.sum;
    sum_sq += b.sum_sq;
  }

  MonteCarloEstimate est;
  est.trials = trials;
  est.seed = seed;
  const double n = static_cast<double>(trials);
  est.mean = sum / n;
  if (trials > 1) {
    const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

}  // namespace

TrialDraw sample_trial(const ChannelConfig& cfg, const Protocol& proto,
                       SplitMix64& rng) {
  return TrialSampler(cfg, proto)(rng);
}

MonteCarloEstimate mc_outage(const ChannelConfig& cfg, const Protocol& proto,
                             double gamma_th, std::uint64_t trials,
                             std::uint64_t seed, unsigned workers) {
  if (!(gamma_th >= 0.0)) throw std::domain_error("mc_outage: requires gamma_th >= 0");
  return run_blocks(cfg, proto, trials, seed, workers,
                    [gamma_th](const TrialDraw& d) {
                      return std::min(d.gamma_sr, d.gamma_rd) <= gamma_th ? 1.0 : 0.0;
                    });
}

MonteCarloEstimate mc_ergodic(const ChannelConfig& cfg, const Protocol& proto,
                              std::uint64_t trials, std::uint64_t seed,
                              unsigned workers) {
  return run_blocks(cfg, proto, trials, seed, workers, [](const TrialDraw& d) {
    return 0.5 * std::log2(1.0 + std::min(d.gamma_sr, d.gamma_rd));
  });
}

}  // namespace ehrelay
