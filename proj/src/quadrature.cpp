#include "ehrelay/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ehrelay/errors.hpp"

namespace ehrelay {
namespace {

// 15-point Kronrod abscissae (positive half, descending) with the
// embedded 7-point Gauss rule on the odd indices; QUADPACK dqk15 constants.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value;
  double error;
};

[[noreturn]] void throw_nonfinite(double x) {
  std::ostringstream os;
  os << "quadrature: integrand returned a non-finite value at x = " << x;
  throw quadrature_error(os.str());
}

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  if (!std::isfinite(fc)) throw_nonfinite(center);

  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double flo[7], fhi[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    flo[j] = f(center - dx);
    fhi[j] = f(center + dx);
    if (!std::isfinite(flo[j])) throw_nonfinite(center - dx);
    if (!std::isfinite(fhi[j])) throw_nonfinite(center + dx);
    const double sum = flo[j] + fhi[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(flo[j]) + std::abs(fhi[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }

  const double mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(flo[j] - mean) + std::abs(fhi[j] - mean));

  resabs *= std::abs(half);
  resasc *= std::abs(half);
  const double value = resk * half;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = std::numeric_limits<double>::min();
  if (resabs > tiny / (50.0 * eps)) err = std::max(err, 50.0 * eps * resabs);
  return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureSettings& settings) {
  if (!(settings.relative_tolerance > 0.0) || settings.absolute_tolerance < 0.0)
    throw std::invalid_argument("quadrature: tolerances must be positive/non-negative");
  if (settings.max_subdivisions < 1)
    throw std::invalid_argument("quadrature: max_subdivisions must be >= 1");
  if (!(a <= b)) throw std::invalid_argument("quadrature: requires a <= b");
  if (a == b) return {0.0, 0.0, 0};

  std::vector<Panel> panels;
  panels.push_back(gk15(f, a, b));

  auto worse = [](const Panel& p, const Panel& q) { return p.error < q.error; };
  std::make_heap(panels.begin(), panels.end(), worse);

  double total = panels.front().value;
  double total_err = panels.front().error;
  double stuck_err = 0.0;  // panels too narrow to split further
  int subdivisions = 0;

  const double width_floor =
      std::numeric_limits<double>::epsilon() *
      std::max({std::abs(a), std::abs(b), 1.0});

  while (total_err + stuck_err >
         std::max(settings.absolute_tolerance,
                  settings.relative_tolerance * std::abs(total))) {
    if (panels.empty() || subdivisions >= settings.max_subdivisions) {
      std::ostringstream os;
      os << "quadrature: failed to converge after " << subdivisions
         << " subdivisions (error estimate " << total_err + stuck_err << ")";
      throw quadrature_error(os.str());
    }
    std::pop_heap(panels.begin(), panels.end(), worse);
    const Panel worst = panels.back();
    panels.pop_back();

    if (worst.b - worst.a < width_floor) {
      stuck_err += worst.error;
      total_err -= worst.error;
      continue;
    }

    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push_back(left);
    std::push_heap(panels.begin(), panels.end(), worse);
    panels.push_back(right);
    std::push_heap(panels.begin(), panels.end(), worse);
    ++subdivisions;
  }

  return {total, total_err + stuck_err, subdivisions};
}

}  // namespace ehrelay
