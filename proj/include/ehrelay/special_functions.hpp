#ifndef EHRELAY_SPECIAL_FUNCTIONS_HPP
#define EHRELAY_SPECIAL_FUNCTIONS_HPP

#include "ehrelay/quadrature.hpp"

namespace ehrelay {

/// Modified Bessel function of the second kind K_order(x), integer order.
/// Ascending series at small argument, exponentially scaled integral
/// representation in the mid range, asymptotic expansion at large
/// argument; orders above one by forward recurrence (stable for K).
/// Underflows to zero for very large x instead of erroring.
double bessel_k(int order, double x);

/// Non-normalized upper incomplete gamma: integral over (x, inf) of
/// t^(a-1) e^(-t) dt. Series for x < a+1, continued fraction otherwise.
double upper_incomplete_gamma(double a, double x);

/// Generalized incomplete gamma: integral over (x, inf) of
/// t^(a-1) exp(-t - b/t) dt. b == 0 collapses to upper_incomplete_gamma;
/// otherwise evaluated by adaptive quadrature with the domain split at
/// t = max(x, sqrt(b)) and an exponential tail truncation.
double gen_incomplete_gamma(double a, double x, double b,
                            const QuadratureSettings& settings = {});

/// exp(x) * gen_incomplete_gamma(a, x, b), evaluated as
/// integral over (0, inf) of (x+u)^(a-1) exp(-u - b/(x+u)) du so that
/// large x neither underflows nor needs an explicit exp(x) factor.
double gen_incomplete_gamma_scaled(double a, double x, double b,
                                   const QuadratureSettings& settings = {});

namespace detail {

/// Regularized lower incomplete gamma P(j, x) for integer j >= 1,
/// computed without the 1 - e^(-x) * sum cancellation at small x.
double regularized_gamma_p_int(int j, double x);

}  // namespace detail

}  // namespace ehrelay

#endif  // EHRELAY_SPECIAL_FUNCTIONS_HPP
