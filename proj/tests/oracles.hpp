// Test-only oracles: independent evaluation routes for the quantities the
// library computes in closed form. These stay deliberately dumb -- direct
// quadrature of defining integrals and brute-force sampling -- and must not
// share evaluation paths with the implementations they check.
#ifndef EHRELAY_TESTS_ORACLES_HPP
#define EHRELAY_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ehrelay/quadrature.hpp"

namespace oracles {

// K_n(x) = int_0^inf e^(-x cosh t) cosh(n t) dt.
inline double bessel_k(int order, double x, double rel_tol = 1e-12) {
  double t_max = 1.0;
  while (x * std::cosh(t_max) - order * t_max < 760.0 && t_max < 60.0)
    t_max += 0.5;
  const auto f = [order, x](double t) {
    const double expo = -x * std::cosh(t);
    return std::exp(expo) * std::cosh(order * t);
  };
  ehrelay::QuadratureSettings s;
  s.relative_tolerance = rel_tol;
  s.max_subdivisions = 400;
  return ehrelay::integrate(f, 0.0, t_max, s).value;
}

// Generalized incomplete gamma by quadrature on the (0,1)-mapped domain,
// a different transform than the implementation uses.
inline double gen_gamma(double a, double x, double b, double rel_tol = 1e-9) {
  const auto f = [a, x, b](double u) {
    const double w = 1.0 - u;
    const double t = x + u / w;
    const double expo = -t - (b > 0.0 ? b / t : 0.0);
    if (expo < -745.0) return 0.0;
    return std::pow(t, a - 1.0) * std::exp(expo) / (w * w);
  };
  ehrelay::QuadratureSettings s;
  s.relative_tolerance = rel_tol;
  s.absolute_tolerance = 1e-300;
  s.max_subdivisions = 400;
  return ehrelay::integrate(f, 0.0, 1.0, s).value;
}

// Sum of independent exponentials with the given means.
inline std::vector<double> sample_exp_sums(const std::vector<double>& means,
                                           std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double m : means) {
      std::exponential_distribution<double> d(1.0 / m);
      s += d(rng);
    }
    out[i] = s;
  }
  return out;
}

// One-sample Kolmogorov-Smirnov distance against a CDF callable.
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace oracles

#endif  // EHRELAY_TESTS_ORACLES_HPP
