#ifndef EHRELAY_LINK_MODEL_HPP
#define EHRELAY_LINK_MODEL_HPP

#include <cstddef>
#include <vector>

#include "ehrelay/interference_mixture.hpp"

namespace ehrelay {

enum class ProtocolVariant { TS, PS };

/// Harvesting protocol: TS with time fraction alpha, PS with power
/// fraction theta. The analytic paths require ratio strictly inside
/// (0, 1); the endpoints are meaningful only to throughput evaluators,
/// which short-circuit to zero.
struct Protocol {
  ProtocolVariant variant = ProtocolVariant::TS;
  double ratio = 0.5;
};

/// Physical parameters of the relay link. Interferer lists may be empty;
/// powers and noise variances are linear (dB conversion is a CLI concern).
struct ChannelConfig {
  double source_power = 1.0;
  std::vector<double> interferer_powers;
  double relay_noise_var = 1.0;
  double dest_noise_var = 1.0;
  double mean_gain_sr = 1.0;
  double mean_gain_rd = 1.0;
  std::vector<double> mean_gain_interferers;
  double efficiency = 1.0;  // energy conversion, in [0, 1]

  std::size_t interferer_count() const { return interferer_powers.size(); }
  void validate() const;  // throws std::invalid_argument
};

/// Protocol-resolved scale parameters before any decomposition: mean
/// first-hop SNR, second-hop scale, and per-interferer mean INRs.
struct EffectiveScales {
  double gbar_h = 0.0;
  double gbar_g = 0.0;
  std::vector<double> mu;
};

EffectiveScales effective_scales(const ChannelConfig&, const Protocol&);

/// Everything the closed-form expressions need. decomp_a decomposes the
/// interference means, decomp_b the same means with gbar_h appended.
/// Means that coincide with gbar_h (within 1e-9 relative) are nudged up
/// by 1e-6 relative before decomposition, since the closed-form outage
/// is singular there; nudge_count reports how many were moved.
struct EffectiveParams {
  double gbar_h = 0.0;
  double gbar_g = 0.0;  // zero exactly when efficiency is zero
  std::vector<double> mu;
  CharDecomp decomp_a;
  CharDecomp decomp_b;
  int nudge_count = 0;
};

EffectiveParams effective_params(const ChannelConfig&, const Protocol&);

/// CDF of the first-hop SINR gamma_h / (1 + I_R).
double cdf_gamma_sr(const EffectiveParams&, double gamma);

/// CDF of the second-hop SNR W (gamma_h + I_R).
double cdf_gamma_rd(const EffectiveParams&, double gamma);

/// Density of Z = (gamma_h + I_R) conditioned-by-indicator on first-hop
/// decode success at gamma_th; zero for z <= gamma_th. Integrates over
/// (gamma_th, inf) to the decode-success probability.
double pdf_z(const EffectiveParams&, double gamma_th, double z);

enum class OutageMethod { ClosedForm, Integral };

/// End-to-end outage probability at threshold gamma_th. ClosedForm throws
/// conditioning_error when its alternating sum loses more than eight
/// significant digits; Integral is the authoritative fallback.
double outage_probability(const EffectiveParams&, double gamma_th,
                          OutageMethod method);

namespace detail {

// Closed-form evaluation routes, exposed for cross-validation: the
// general characteristic-coefficient sum, its all-equal-means reduction,
// and its single-interferer reduction.
double outage_closed_general(const EffectiveParams&, double gamma_th,
                             double* err_estimate = nullptr);
double outage_closed_iid(const EffectiveParams&, double gamma_th);
double outage_closed_single(const EffectiveParams&, double gamma_th);
double outage_integral(const EffectiveParams&, double gamma_th,
                       double* err_estimate = nullptr);

// Dispatching evaluator that also reports an error estimate.
double outage_with_error(const EffectiveParams&, double gamma_th,
                         OutageMethod, double* err_estimate);

}  // namespace detail

}  // namespace ehrelay

#endif  // EHRELAY_LINK_MODEL_HPP
