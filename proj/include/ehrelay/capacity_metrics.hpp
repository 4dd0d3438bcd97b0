#ifndef EHRELAY_CAPACITY_METRICS_HPP
#define EHRELAY_CAPACITY_METRICS_HPP

#include "ehrelay/link_model.hpp"
#include "ehrelay/quadrature.hpp"

namespace ehrelay {

enum class CapacityMethod { analytic, monte_carlo };

struct CapacityResult {
  double value = 0.0;  // bits/s/Hz
  CapacityMethod method = CapacityMethod::analytic;
  double est_error = 0.0;  // quadrature error bound or MC standard error
};

/// Ergodic capacity of the two-hop link: the outage-complement integral
/// over the SNR axis, mapped onto (0, 1) and capped at gamma = 1e8 with a
/// tail bound folded into est_error. The closed-form outage feeds the
/// integrand while well-conditioned; the integral form takes over when
/// the cancellation sentinel trips.
CapacityResult ergodic_capacity(const EffectiveParams&,
                                const QuadratureSettings& settings = {});

/// (1/2) (1 - P_out(gamma_th)) log2(1 + gamma_th).
CapacityResult outage_capacity(const EffectiveParams&, double gamma_th);

/// Achievable throughput for a capacity value: TS pays the (1 - alpha)
/// harvesting-time factor, PS passes the capacity through. TS ratio
/// endpoints yield zero.
double throughput(const Protocol&, const CapacityResult&);

}  // namespace ehrelay

#endif  // EHRELAY_CAPACITY_METRICS_HPP
