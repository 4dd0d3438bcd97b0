#ifndef EHRELAY_ERRORS_HPP
#define EHRELAY_ERRORS_HPP

#include <stdexcept>

namespace ehrelay {

/// Data-dependent numeric failure (as opposed to a caller bug, which is
/// reported through std::invalid_argument / std::domain_error).
class numeric_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Catastrophic cancellation or coefficient blow-up. The operation that
/// throws this has a better-conditioned alternative the caller can use.
class conditioning_error : public numeric_error {
public:
  using numeric_error::numeric_error;
};

/// Adaptive quadrature exhausted its subdivision budget, or the integrand
/// produced a non-finite value.
class quadrature_error : public numeric_error {
public:
  using numeric_error::numeric_error;
};

}  // namespace ehrelay

#endif  // EHRELAY_ERRORS_HPP
