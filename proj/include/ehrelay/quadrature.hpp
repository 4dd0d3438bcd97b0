#ifndef EHRELAY_QUADRATURE_HPP
#define EHRELAY_QUADRATURE_HPP

#include <functional>

namespace ehrelay {

/// Tolerances shared by the adaptive integrator and the integral-backed
/// special functions.
struct QuadratureSettings {
  double relative_tolerance = 1e-8;
  double absolute_tolerance = 0.0;
  int max_subdivisions = 200;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

/// Globally adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
/// Converges when the accumulated error estimate drops below
/// max(absolute_tolerance, relative_tolerance * |value|). Throws
/// quadrature_error when the subdivision budget runs out first or the
/// integrand returns a non-finite value.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureSettings& settings = {});

}  // namespace ehrelay

#endif  // EHRELAY_QUADRATURE_HPP
