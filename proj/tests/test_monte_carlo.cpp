#include "ehrelay/monte_carlo.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

using namespace ehrelay;

namespace {

ChannelConfig preset() {
  ChannelConfig cfg;
  cfg.source_power = 100.0;           // 20 dB over unit noise
  cfg.interferer_powers = {6.0, 4.0};  // SIR 10 dB split 0.6/0.4
  cfg.mean_gain_interferers = {1.0, 1.0};
  return cfg;
}

const Protocol kTs{ProtocolVariant::TS, 0.2};

}  // namespace

TEST_CASE("fixed seed and trial count reproduce bit-identical estimates") {
  const auto a = mc_outage(preset(), kTs, 6.31, 300000, 42);
  const auto b = mc_outage(preset(), kTs, 6.31, 300000, 42);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  const auto c = mc_outage(preset(), kTs, 6.31, 300000, 43);
  CHECK(a.mean != c.mean);
}

TEST_CASE("estimates are independent of the worker count") {
  for (std::uint64_t trials : {65536ull * 3 + 1234, 100000ull}) {
    const auto w1 = mc_ergodic(preset(), kTs, trials, 7, 1);
    const auto w3 = mc_ergodic(preset(), kTs, trials, 7, 3);
    const auto w8 = mc_ergodic(preset(), kTs, trials, 7, 8);
    CHECK(w1.mean == w3.mean);
    CHECK(w3.mean == w8.mean);
    CHECK(w1.std_error == w3.std_error);
    CHECK(w3.std_error == w8.std_error);
  }
}

TEST_CASE("trial draws satisfy the SNR identities") {
  SplitMix64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const TrialDraw d = sample_trial(preset(), kTs, rng);
    CHECK(d.gamma_sr == d.gamma_h / (1.0 + d.i_r));
    CHECK(d.gamma_rd == d.w * (d.gamma_h + d.i_r));
    CHECK(d.gamma_h >= 0.0);
    CHECK(d.i_r >= 0.0);
    CHECK(d.w >= 0.0);
  }
}

TEST_CASE("eta = 0 zeroes the second hop and the ergodic estimate") {
  ChannelConfig cfg = preset();
  cfg.efficiency = 0.0;
  SplitMix64 rng(3);
  for (int i = 0; i < 500; ++i) CHECK(sample_trial(cfg, kTs, rng).gamma_rd == 0.0);
  CHECK(mc_ergodic(cfg, kTs, 20000, 11).mean == 0.0);
}

TEST_CASE("no interferers means zero aggregate interference") {
  ChannelConfig cfg = preset();
  cfg.interferer_powers.clear();
  cfg.mean_gain_interferers.clear();
  SplitMix64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const TrialDraw d = sample_trial(cfg, kTs, rng);
    CHECK(d.i_r == 0.0);
    CHECK(d.gamma_sr == d.gamma_h);
  }
}

TEST_CASE("first-hop sample mean honors the law of large numbers") {
  const std::uint64_t n = 1000000;
  SplitMix64 rng(123);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) sum += sample_trial(preset(), kTs, rng).gamma_h;
  const double gbar_h = effective_scales(preset(), kTs).gbar_h;
  const double se = gbar_h / std::sqrt(static_cast<double>(n));  // exp std = mean
  CHECK(std::abs(sum / n - gbar_h) <= 3.0 * se);
}

TEST_CASE("degenerate thresholds") {
  CHECK(mc_outage(preset(), kTs, 0.0, 50000, 8).mean == 0.0);
  CHECK(mc_outage(preset(), kTs, 1e12, 50000, 8).mean == 1.0);
}

TEST_CASE("empirical CDFs converge to the closed forms (KS)") {
  const EffectiveParams p = effective_params(preset(), kTs);
  const std::size_t n = 200000;
  std::vector<double> sr, rd;
  sr.reserve(n);
  rd.reserve(n);
  SplitMix64 rng(321);
  for (std::size_t i = 0; i < n; ++i) {
    const TrialDraw d = sample_trial(preset(), kTs, rng);
    sr.push_back(d.gamma_sr);
    rd.push_back(d.gamma_rd);
  }
  const double bound = 5.0 / std::sqrt(static_cast<double>(n));
  CHECK(oracles::ks_distance(sr, [&p](double g) { return cdf_gamma_sr(p, g); }) < bound);
  CHECK(oracles::ks_distance(rd, [&p](double g) { return cdf_gamma_rd(p, g); }) < bound);
}

TEST_CASE("standard error shrinks like 1/sqrt(n) and validates inputs") {
  const auto small = mc_outage(preset(), kTs, 6.31, 10000, 9);
  const auto large = mc_outage(preset(), kTs, 6.31, 640000, 9);
  CHECK(large.std_error < small.std_error);
  CHECK(small.std_error == doctest::Approx(8.0 * large.std_error).epsilon(0.12));
  CHECK_THROWS_AS(mc_outage(preset(), kTs, 6.31, 0, 1), std::invalid_argument);
  const auto single = mc_ergodic(preset(), kTs, 1, 12);
  CHECK(single.trials == 1);
  CHECK(single.std_error == 0.0);
}
