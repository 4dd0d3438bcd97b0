#include "ehrelay/capacity_metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ehrelay/monte_carlo.hpp"

using namespace ehrelay;

namespace {

double db2lin(double db) { return std::pow(10.0, db / 10.0); }

ChannelConfig make_config(double snr_db, double sir_db,
                          const std::vector<double>& weights, double eta = 1.0) {
  ChannelConfig cfg;
  cfg.source_power = db2lin(snr_db);
  cfg.efficiency = eta;
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  const double aggregate = cfg.source_power / db2lin(sir_db);
  for (double w : weights) {
    if (w > 0.0) {
      cfg.interferer_powers.push_back(w / wsum * aggregate);
      cfg.mean_gain_interferers.push_back(1.0);
    }
  }
  return cfg;
}

const ChannelConfig kPreset = make_config(20.0, 10.0, {0.6, 0.4});
const double kGammaTh = db2lin(8.0);

}  // namespace

TEST_CASE("ergodic capacity dies with the second hop") {
  // eta = 0: no harvested energy at all.
  const ChannelConfig cfg = make_config(20.0, 10.0, {0.6, 0.4}, 0.0);
  const EffectiveParams p = effective_params(cfg, {ProtocolVariant::TS, 0.2});
  const CapacityResult c = ergodic_capacity(p);
  CHECK(c.value == 0.0);
  CHECK(c.est_error == 0.0);

  // TS alpha -> 0: the harvesting window closes.
  const EffectiveParams q = effective_params(kPreset, {ProtocolVariant::TS, 1e-7});
  CHECK(ergodic_capacity(q).value < 1e-4);
}

TEST_CASE("ergodic capacity matches the MC oracle on the preset") {
  for (const Protocol proto : {Protocol{ProtocolVariant::TS, 0.2},
                               Protocol{ProtocolVariant::PS, 0.6}}) {
    const EffectiveParams p = effective_params(kPreset, proto);
    const CapacityResult c = ergodic_capacity(p);
    const MonteCarloEstimate mc = mc_ergodic(kPreset, proto, 1000000, 99);
    const double tol = std::max(0.01, 3.0 * mc.std_error);
    CHECK_MESSAGE(std::abs(c.value - mc.mean) <= tol,
                  "analytic=", c.value, " mc=", mc.mean);
    CHECK(c.method == CapacityMethod::analytic);
    CHECK(c.est_error >= 0.0);
    CHECK(c.est_error < 1e-4);
  }
}

TEST_CASE("ergodic capacity is nonincreasing in each interference mean") {
  // Bump one interferer power, holding everything else fixed.
  const EffectiveParams base = effective_params(kPreset, {ProtocolVariant::TS, 0.25});
  const double c0 = ergodic_capacity(base).value;
  for (std::size_t idx : {0u, 1u}) {
    ChannelConfig bumped = kPreset;
    bumped.interferer_powers[idx] *= 1.25;
    const EffectiveParams p = effective_params(bumped, {ProtocolVariant::TS, 0.25});
    CHECK(ergodic_capacity(p).value <= c0 + 1e-9);
  }
}

TEST_CASE("outage capacity composes rate and outage exactly") {
  const EffectiveParams p = effective_params(kPreset, {ProtocolVariant::TS, 0.2});
  const double pout = outage_probability(p, kGammaTh, OutageMethod::ClosedForm);
  const CapacityResult c = outage_capacity(p, kGammaTh);
  CHECK(c.value ==
        doctest::Approx(0.5 * (1.0 - pout) * std::log2(1.0 + kGammaTh)).epsilon(1e-12));

  // Degenerate thresholds at both ends.
  CHECK(outage_capacity(p, 1e-12).value < 1e-11);
  CHECK(outage_capacity(p, 1e9).value < 1e-6);
  CHECK_THROWS_AS(outage_capacity(p, 0.0), std::domain_error);
}

TEST_CASE("outage capacity validates against MC rate accounting") {
  const Protocol proto{ProtocolVariant::PS, 0.6};
  const EffectiveParams p = effective_params(kPreset, proto);
  const CapacityResult c = outage_capacity(p, kGammaTh);
  const MonteCarloEstimate mc = mc_outage(kPreset, proto, kGammaTh, 1000000, 31);
  const double rate = 0.5 * std::log2(1.0 + kGammaTh);
  CHECK(std::abs(c.value - rate * (1.0 - mc.mean)) <= 3.0 * rate * mc.std_error);
}

TEST_CASE("throughput applies the protocol time accounting") {
  const CapacityResult c{0.8, CapacityMethod::analytic, 0.0};
  CHECK(throughput({ProtocolVariant::TS, 1.0}, c) == 0.0);
  CHECK(throughput({ProtocolVariant::TS, 0.0}, c) == 0.0);
  CHECK(throughput({ProtocolVariant::TS, 0.5}, c) == doctest::Approx(0.4));
  const CapacityResult d{0.73, CapacityMethod::analytic, 0.0};
  CHECK(throughput({ProtocolVariant::PS, 0.3}, d) == 0.73);
}

TEST_CASE("outage capacity is unimodal in the threshold on the preset") {
  // Diagnostic sweep: a single sign change of the discrete derivative.
  const EffectiveParams p = effective_params(kPreset, {ProtocolVariant::TS, 0.2});
  std::vector<double> values;
  for (double gdb = -10.0; gdb <= 25.0; gdb += 1.0)
    values.push_back(outage_capacity(p, db2lin(gdb)).value);
  int sign_changes = 0;
  for (std::size_t i = 2; i < values.size(); ++i) {
    const bool rising_prev = values[i - 1] > values[i - 2];
    const bool rising_cur = values[i] > values[i - 1];
    if (rising_prev != rising_cur) ++sign_changes;
  }
  CHECK(sign_changes == 1);
}
