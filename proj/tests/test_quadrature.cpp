#include "ehrelay/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "ehrelay/errors.hpp"

using ehrelay::integrate;
using ehrelay::QuadratureSettings;

TEST_CASE("polynomial and trig integrals converge to analytic values") {
  auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  r = integrate([](double x) { return std::sin(x); }, 0.0, 3.141592653589793);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

  r = integrate([](double x) { return std::exp(-x * x); }, -5.0, 5.0);
  CHECK(r.value == doctest::Approx(std::sqrt(3.141592653589793) * std::erf(5.0))
                       .epsilon(1e-12));
}

TEST_CASE("error estimate bounds the true error") {
  const auto r = integrate([](double x) { return std::cos(10.0 * x); }, 0.0, 2.0);
  const double expected = std::sin(20.0) / 10.0;
  CHECK(std::abs(r.value - expected) <= std::max(r.error_estimate, 1e-13));
}

TEST_CASE("integrable endpoint singularity is refined adaptively") {
  QuadratureSettings s;
  s.relative_tolerance = 1e-6;
  s.max_subdivisions = 400;
  const auto r = integrate([](double x) { return std::log(x); }, 0.0, 1.0, s);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("budget exhaustion raises quadrature_error") {
  QuadratureSettings s;
  s.relative_tolerance = 1e-12;
  s.max_subdivisions = 2;
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(50.0 * x) / (1e-3 + x); },
                            0.0, 10.0, s),
                  ehrelay::quadrature_error);
}

TEST_CASE("non-finite integrand values are reported") {
  CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0.0, 1.0),
                  ehrelay::quadrature_error);
}

TEST_CASE("settings are validated") {
  QuadratureSettings bad;
  bad.relative_tolerance = 0.0;
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, bad),
                  std::invalid_argument);
  bad = {};
  bad.max_subdivisions = 0;
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, bad),
                  std::invalid_argument);
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
}
