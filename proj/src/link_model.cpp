#include "ehrelay/link_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ehrelay/errors.hpp"
#include "ehrelay/quadrature.hpp"
#include "ehrelay/special_functions.hpp"

namespace ehrelay {
namespace {

constexpr double kDegeneracyTol = 1e-9;   // |mu - gbar_h| treated as coincident
constexpr double kDegeneracyNudge = 1e-6;  // relative bump applied to offenders
constexpr double kSentinelRatio = 1e8;     // eight significant digits lost

// Quadrature request for the generalized-incomplete-gamma kernels inside the
// closed forms; tighter than the public default so their noise stays below
// the ergodic integrand tolerances.
const QuadratureSettings kKernelSettings{1e-10, 0.0, 200};

double ipow(double base, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

double factorial(int n) {
  static const double table[] = {1., 1., 2., 6., 24., 120., 720., 5040., 40320.,
                                 362880., 3628800., 39916800., 479001600.};
  if (n < 13) return table[n];
  return std::tgamma(n + 1.0);
}

double binomial(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

// Kahan sum of terms pre-sorted by descending magnitude; reports the
// largest magnitude for the cancellation sentinel.
double compensated_sum(std::vector<double>& terms, double* max_abs,
                       double* sum_abs) {
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  double sum = 0.0, comp = 0.0, sabs = 0.0;
  for (double t : terms) {
    sabs += std::abs(t);
    const double y = t - comp;
    const double next = sum + y;
    comp = (next - sum) - y;
    sum = next;
  }
  *max_abs = terms.empty() ? 0.0 : std::abs(terms.front());
  *sum_abs = sabs;
  return sum;
}

// e^(-z/gbar_h) * integral_0^u y^(j-1) e^(-a y) dy, assembled so the
// exponentials never overflow: a >= -1/gbar_h always, so the growing
// branch is dominated by the e^(-z/gbar_h) prefactor.
double scaled_truncated_moment(int j, double a, double u, double z_over_gh) {
  if (u <= 0.0) return 0.0;
  if (a > 0.0) {
    return std::exp(-z_over_gh) * factorial(j - 1) / ipow(a, j) *
           detail::regularized_gamma_p_int(j, a * u);
  }
  const double c = -a;  // >= 0
  double term = std::exp(j * std::log(u) - z_over_gh);
  double sum = term / j;
  for (int n = 1; n < 10000; ++n) {
    term *= c * u / n;
    const double inc = term / (n + j);
    sum += inc;
    if (inc < std::numeric_limits<double>::epsilon() * sum && n > c * u) break;
  }
  return sum;
}

}  // namespace

void ChannelConfig::validate() const {
  if (!(source_power > 0.0)) throw std::invalid_argument("ChannelConfig: source_power must be > 0");
  if (!(relay_noise_var > 0.0) || !(dest_noise_var > 0.0))
    throw std::invalid_argument("ChannelConfig: noise variances must be > 0");
  if (!(mean_gain_sr > 0.0) || !(mean_gain_rd > 0.0))
    throw std::invalid_argument("ChannelConfig: mean channel gains must be > 0");
  if (!(efficiency >= 0.0) || !(efficiency <= 1.0))
    throw std::invalid_argument("ChannelConfig: efficiency must lie in [0, 1]");
  if (interferer_powers.size() != mean_gain_interferers.size())
    throw std::invalid_argument(
        "ChannelConfig: interferer power and gain lists must have equal length");
  for (double p : interferer_powers)
    if (!(p > 0.0)) throw std::invalid_argument("ChannelConfig: interferer powers must be > 0");
  for (double g : mean_gain_interferers)
    if (!(g > 0.0)) throw std::invalid_argument("ChannelConfig: interferer gains must be > 0");
}

EffectiveScales effective_scales(const ChannelConfig& cfg, const Protocol& proto) {
  cfg.validate();
  if (!(proto.ratio > 0.0) || !(proto.ratio < 1.0))
    throw std::invalid_argument("Protocol: ratio must lie strictly inside (0, 1)");

  EffectiveScales s;
  const double noise_ratio = cfg.relay_noise_var / cfg.dest_noise_var;
  const std::size_t m = cfg.interferer_count();
  s.mu.resize(m);
  if (proto.variant == ProtocolVariant::TS) {
    const double alpha = proto.ratio;
    s.gbar_h = cfg.source_power / cfg.relay_noise_var * cfg.mean_gain_sr;
    for (std::size_t i = 0; i < m; ++i)
      s.mu[i] = cfg.interferer_powers[i] / cfg.relay_noise_var * cfg.mean_gain_interferers[i];
    s.gbar_g = 2.0 * alpha * cfg.efficiency / (1.0 - alpha) * noise_ratio * cfg.mean_gain_rd;
  } else {
    const double theta = proto.ratio;
    s.gbar_h = (1.0 - theta) * cfg.source_power / cfg.relay_noise_var * cfg.mean_gain_sr;
    for (std::size_t i = 0; i < m; ++i)
      s.mu[i] = (1.0 - theta) * cfg.interferer_powers[i] / cfg.relay_noise_var *
                cfg.mean_gain_interferers[i];
    s.gbar_g = cfg.efficiency * theta / (1.0 - theta) * noise_ratio * cfg.mean_gain_rd;
  }
  return s;
}

EffectiveParams effective_params(const ChannelConfig& cfg, const Protocol& proto) {
  EffectiveScales s = effective_scales(cfg, proto);
  EffectiveParams p;
  p.gbar_h = s.gbar_h;
  p.gbar_g = s.gbar_g;
  p.mu = std::move(s.mu);

  // The closed-form outage has a pole at mu = gbar_h; move coincident
  // means off it. The true distribution is continuous there.
  for (double& mu : p.mu) {
    if (std::abs(mu - p.gbar_h) <= kDegeneracyTol * p.gbar_h) {
      mu *= 1.0 + kDegeneracyNudge;
      ++p.nudge_count;
    }
  }

  p.decomp_a = characteristic_decomposition(p.mu);
  std::vector<double> with_gh = p.mu;
  with_gh.push_back(p.gbar_h);
  p.decomp_b = characteristic_decomposition(with_gh);
  return p;
}

double cdf_gamma_sr(const EffectiveParams& p, double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error("cdf_gamma_sr: requires gamma >= 0");
  if (gamma == 0.0) return 0.0;
  double mix = 0.0;
  if (p.decomp_a.empty()) {
    mix = 1.0;
  } else {
    for (std::size_t i = 0; i < p.decomp_a.distinct_means.size(); ++i) {
      const double base = 1.0 + p.decomp_a.distinct_means[i] * gamma / p.gbar_h;
      double denom = base;
      for (int j = 1; j <= p.decomp_a.multiplicities[i]; ++j) {
        mix += p.decomp_a.coefficients[i][j - 1] / denom;
        denom *= base;
      }
    }
  }
  return std::clamp(1.0 - std::exp(-gamma / p.gbar_h) * mix, 0.0, 1.0);
}

double cdf_gamma_rd(const EffectiveParams& p, double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error("cdf_gamma_rd: requires gamma >= 0");
  if (gamma == 0.0) return 0.0;
  if (p.gbar_g == 0.0) return 1.0;
  double mix = 0.0;
  for (std::size_t i = 0; i < p.decomp_b.distinct_means.size(); ++i) {
    const double s = gamma / (p.gbar_g * p.decomp_b.distinct_means[i]);
    for (int j = 1; j <= p.decomp_b.multiplicities[i]; ++j) {
      const double chi = p.decomp_b.coefficients[i][j - 1];
      if (chi == 0.0) continue;
      double factor;
      if (s < 1e-12) {
        factor = 1.0;  // 2 s^(j/2) K_j(2 sqrt(s)) -> (j-1)! as s -> 0
      } else {
        const double kj = bessel_k(j, 2.0 * std::sqrt(s));
        factor = kj == 0.0 ? 0.0
                           : 2.0 * std::pow(s, 0.5 * j) * kj / factorial(j - 1);
      }
      mix += chi * factor;
    }
  }
  return std::clamp(1.0 - mix, 0.0, 1.0);
}

double pdf_z(const EffectiveParams& p, double gamma_th, double z) {
  if (!(gamma_th > 0.0)) throw std::domain_error("pdf_z: requires gamma_th > 0");
  if (!(z > gamma_th)) return 0.0;
  const double z_over_gh = z / p.gbar_h;
  if (p.decomp_a.empty()) return std::exp(-z_over_gh) / p.gbar_h;

  const double u = (z - gamma_th) / (1.0 + gamma_th);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.decomp_a.distinct_means.size(); ++i) {
    const double mu = p.decomp_a.distinct_means[i];
    const double a = 1.0 / mu - 1.0 / p.gbar_h;
    double mu_pow = mu;
    for (int j = 1; j <= p.decomp_a.multiplicities[i]; ++j) {
      const double chi = p.decomp_a.coefficients[i][j - 1];
      if (chi != 0.0)
        sum += chi / (mu_pow * factorial(j - 1)) *
               scaled_truncated_moment(j, a, u, z_over_gh);
      mu_pow *= mu;
    }
  }
  return std::max(0.0, sum / p.gbar_h);
}

namespace detail {

namespace {

struct KernelCache {
  // gen_incomplete_gamma_scaled(m+1, b*gth, b*gth/gbar_g) for m = 0..count-1
  std::vector<double> values;
};

KernelCache make_kernels(double b, double gamma_th, double gbar_g, int count) {
  KernelCache k;
  k.values.reserve(count);
  const double x = b * gamma_th;
  for (int m = 0; m < count; ++m)
    k.values.push_back(gen_incomplete_gamma_scaled(m + 1, x, x / gbar_g, kKernelSettings));
  return k;
}

}  // namespace

double outage_closed_general(const EffectiveParams& p, double gamma_th,
                             double* err_estimate) {
  if (!(gamma_th > 0.0)) throw std::domain_error("outage: requires gamma_th > 0");
  if (p.gbar_g == 0.0) {
    if (err_estimate) *err_estimate = 0.0;
    return 1.0;
  }
  const double s = gamma_th / p.gbar_h;
  const double sc0 =
      gen_incomplete_gamma_scaled(1.0, s, gamma_th / (p.gbar_h * p.gbar_g), kKernelSettings);

  std::vector<double> terms;
  if (p.decomp_a.empty()) {
    terms.push_back(sc0);
  } else {
    for (std::size_t i = 0; i < p.decomp_a.distinct_means.size(); ++i) {
      const double mu = p.decomp_a.distinct_means[i];
      const int tau = p.decomp_a.multiplicities[i];
      const double a = 1.0 / mu - 1.0 / p.gbar_h;
      const double b = 1.0 / p.gbar_h + a / (1.0 + gamma_th);
      const KernelCache kernels = make_kernels(b, gamma_th, p.gbar_g, tau);
      const double neg_a_frac = -a * gamma_th / (1.0 + gamma_th);
      const double pole = 1.0 - mu / p.gbar_h;
      for (int j = 1; j <= tau; ++j) {
        const double chi = p.decomp_a.coefficients[i][j - 1];
        if (chi == 0.0) continue;
        const double pref = chi / ipow(pole, j);
        terms.push_back(pref * sc0);
        for (int k = 0; k < j; ++k) {
          const double fk = ipow(neg_a_frac, k) / factorial(k);
          for (int m = 0; m <= k; ++m) {
            terms.push_back(-pref / p.gbar_h * fk * binomial(k, m) /
                            ipow(-b * gamma_th, m) / b * kernels.values[m]);
          }
        }
      }
    }
  }

  double max_abs = 0.0, sum_abs = 0.0;
  const double q = compensated_sum(terms, &max_abs, &sum_abs);
  const double scale = std::exp(-s);
  // Digit-loss sentinel: fire only when the cancellation is material to
  // P_out itself; the e^(-s) prefactor can render a noisy sum harmless.
  if (max_abs > kSentinelRatio * std::max(std::abs(q), 1e-300) &&
      scale * max_abs * 1e-16 > 1e-12) {
    std::ostringstream os;
    os << "outage_closed_general: alternating sum lost more than 8 digits "
          "(max term "
       << max_abs << ", sum " << q << "); use the Integral method";
    throw conditioning_error(os.str());
  }
  if (err_estimate)
    *err_estimate = scale * (sum_abs * 1e-10 +
                             max_abs * 1e-15 * static_cast<double>(terms.size()));
  return std::clamp(1.0 - scale * q, 0.0, 1.0);
}

double outage_closed_iid(const EffectiveParams& p, double gamma_th) {
  if (!(gamma_th > 0.0)) throw std::domain_error("outage: requires gamma_th > 0");
  if (p.decomp_a.distinct_means.size() != 1)
    throw std::invalid_argument("outage_closed_iid: means are not all equal");
  if (p.gbar_g == 0.0) return 1.0;

  const double mu = p.decomp_a.distinct_means[0];
  const int m_count = p.decomp_a.multiplicities[0];
  const double a = 1.0 / mu - 1.0 / p.gbar_h;
  const double b = 1.0 / p.gbar_h + a / (1.0 + gamma_th);
  const double s = gamma_th / p.gbar_h;
  const double sc0 =
      gen_incomplete_gamma_scaled(1.0, s, gamma_th / (p.gbar_h * p.gbar_g), kKernelSettings);
  const KernelCache kernels = make_kernels(b, gamma_th, p.gbar_g, m_count);

  const double neg_a_frac = -a * gamma_th / (1.0 + gamma_th);
  const double pref = 1.0 / ipow(1.0 - mu / p.gbar_h, m_count);
  std::vector<double> terms{pref * sc0};
  for (int k = 0; k < m_count; ++k) {
    const double fk = ipow(neg_a_frac, k) / factorial(k);
    for (int m = 0; m <= k; ++m)
      terms.push_back(-pref / p.gbar_h * fk * binomial(k, m) /
                      ipow(-b * gamma_th, m) / b * kernels.values[m]);
  }
  double max_abs = 0.0, sum_abs = 0.0;
  const double q = compensated_sum(terms, &max_abs, &sum_abs);
  if (max_abs > kSentinelRatio * std::max(std::abs(q), 1e-300) &&
      std::exp(-s) * max_abs * 1e-16 > 1e-12)
    throw conditioning_error(
        "outage_closed_iid: alternating sum lost more than 8 digits; use the "
        "Integral method");
  return std::clamp(1.0 - std::exp(-s) * q, 0.0, 1.0);
}

double outage_closed_single(const EffectiveParams& p, double gamma_th) {
  if (!(gamma_th > 0.0)) throw std::domain_error("outage: requires gamma_th > 0");
  if (p.mu.size() != 1)
    throw std::invalid_argument("outage_closed_single: requires exactly one interferer");
  if (p.gbar_g == 0.0) return 1.0;

  const double mu = p.mu[0];
  const double a = 1.0 / mu - 1.0 / p.gbar_h;
  const double b = 1.0 / p.gbar_h + a / (1.0 + gamma_th);
  const double s = gamma_th / p.gbar_h;
  const double sc0 =
      gen_incomplete_gamma_scaled(1.0, s, gamma_th / (p.gbar_h * p.gbar_g), kKernelSettings);
  const double sc1 = gen_incomplete_gamma_scaled(1.0, b * gamma_th,
                                                 b * gamma_th / p.gbar_g, kKernelSettings);
  const double t0 = p.gbar_h / (p.gbar_h - mu) * sc0;
  const double t1 = -sc1 / ((p.gbar_h - mu) * b);
  const double q = t0 + t1;
  const double max_abs = std::max(std::abs(t0), std::abs(t1));
  if (max_abs > kSentinelRatio * std::max(std::abs(q), 1e-300) &&
      std::exp(-s) * max_abs * 1e-16 > 1e-12)
    throw conditioning_error(
        "outage_closed_single: cancellation lost more than 8 digits; use the "
        "Integral method");
  return std::clamp(1.0 - std::exp(-s) * q, 0.0, 1.0);
}

double outage_integral(const EffectiveParams& p, double gamma_th,
                       double* err_estimate) {
  if (!(gamma_th > 0.0)) throw std::domain_error("outage: requires gamma_th > 0");
  if (p.gbar_g == 0.0) {
    if (err_estimate) *err_estimate = 0.0;
    return 1.0;
  }
  // z = gamma_th + gbar_h t/(1-t) maps (gamma_th, inf) onto (0, 1).
  const double gh = p.gbar_h;
  const auto integrand = [&](double t) {
    const double w = 1.0 - t;
    const double z = gamma_th + gh * t / w;
    const double fz = pdf_z(p, gamma_th, z);
    if (fz == 0.0) return 0.0;
    return std::exp(-gamma_th / (p.gbar_g * z)) * fz * gh / (w * w);
  };
  const QuadratureResult r = integrate(integrand, 0.0, 1.0, {1e-9, 1e-14, 300});
  if (err_estimate) *err_estimate = r.error_estimate;
  return std::clamp(1.0 - r.value, 0.0, 1.0);
}

double outage_with_error(const EffectiveParams& p, double gamma_th,
                         OutageMethod method, double* err_estimate) {
  if (method == OutageMethod::Integral)
    return outage_integral(p, gamma_th, err_estimate);
  // Closed form, routed through the reductions where they apply.
  if (p.mu.size() == 1) {
    const double v = outage_closed_single(p, gamma_th);
    if (err_estimate) *err_estimate = 1e-10 * (1.0 + std::abs(v));
    return v;
  }
  if (!p.decomp_a.empty() && p.decomp_a.distinct_means.size() == 1 &&
      p.decomp_a.multiplicities[0] >= 2) {
    const double v = outage_closed_iid(p, gamma_th);
    if (err_estimate) *err_estimate = 1e-9 * (1.0 + std::abs(v));
    return v;
  }
  return outage_closed_general(p, gamma_th, err_estimate);
}

}  // namespace detail

double outage_probability(const EffectiveParams& p, double gamma_th,
                          OutageMethod method) {
  return detail::outage_with_error(p, gamma_th, method, nullptr);
}

}  // namespace ehrelay
