#include "ehrelay/capacity_metrics.hpp"

#include <cmath>

#include "ehrelay/errors.hpp"

namespace ehrelay {
namespace {

constexpr double kGammaCap = 1e8;
constexpr double kLn2 = 0.6931471805599453094172321214581766;

double outage_auto(const EffectiveParams& p, double gamma) {
  try {
    return detail::outage_with_error(p, gamma, OutageMethod::ClosedForm, nullptr);
  } catch (const conditioning_error&) {
    return detail::outage_with_error(p, gamma, OutageMethod::Integral, nullptr);
  }
}

// Bound on the neglected integral beyond the cap: 1 - P_out(gamma) is at
// most the first-hop survival sum_|chi| e^(-gamma/gbar_h) there.
double tail_bound(const EffectiveParams& p) {
  double chi_abs = 1.0;
  if (!p.decomp_a.empty()) {
    chi_abs = 0.0;
    for (const auto& row : p.decomp_a.coefficients)
      for (double c : row) chi_abs += std::abs(c);
  }
  return chi_abs * p.gbar_h * std::exp(-kGammaCap / p.gbar_h) / (1.0 + kGammaCap);
}

}  // namespace

CapacityResult ergodic_capacity(const EffectiveParams& p,
                                const QuadratureSettings& settings) {
  if (p.gbar_g == 0.0) return {0.0, CapacityMethod::analytic, 0.0};

  // gamma = u/(1-u) turns the half-line integral of (1-P_out)/(1+gamma)
  // into the integral of (1-P_out(u/(1-u)))/(1-u) over (0, 1).
  const auto integrand = [&p](double u) {
    const double gamma = u / (1.0 - u);
    return (1.0 - outage_auto(p, gamma)) / (1.0 - u);
  };
  const double u_cap = kGammaCap / (1.0 + kGammaCap);
  const QuadratureResult r = integrate(integrand, 0.0, u_cap, settings);

  const double tail = tail_bound(p);
  CapacityResult out;
  out.value = std::max(0.0, r.value / (2.0 * kLn2));
  out.method = CapacityMethod::analytic;
  out.est_error = (r.error_estimate + tail) / (2.0 * kLn2);
  return out;
}

CapacityResult outage_capacity(const EffectiveParams& p, double gamma_th) {
  if (!(gamma_th > 0.0))
    throw std::domain_error("outage_capacity: requires gamma_th > 0");
  double err = 0.0;
  double pout;
  try {
    pout = detail::outage_with_error(p, gamma_th, OutageMethod::ClosedForm, &err);
  } catch (const conditioning_error&) {
    pout = detail::outage_with_error(p, gamma_th, OutageMethod::Integral, &err);
  }
  const double rate = 0.5 * std::log2(1.0 + gamma_th);
  return {rate * (1.0 - pout), CapacityMethod::analytic, rate * err};
}

double throughput(const Protocol& proto, const CapacityResult& c) {
  if (proto.variant == ProtocolVariant::TS) {
    if (proto.ratio <= 0.0 || proto.ratio >= 1.0) return 0.0;
    return (1.0 - proto.ratio) * c.value;
  }
  return c.value;
}

}  // namespace ehrelay
