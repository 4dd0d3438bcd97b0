#include "ehrelay/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ehrelay/errors.hpp"

namespace ehrelay {
namespace {

constexpr double kGolden = 0.6180339887498948482045868343656381;  // 1/phi
constexpr int kCoarsePoints = 33;

double checked_ratio_eval(const ChannelConfig& cfg, ProtocolVariant variant,
                          double ratio, Metric metric, double gamma_th,
                          const QuadratureSettings& settings, double* err) {
  try {
    return throughput_at_ratio(cfg, variant, ratio, metric, gamma_th, settings, err);
  } catch (const numeric_error& e) {
    std::ostringstream os;
    os << e.what() << " (at ratio = " << ratio << ")";
    throw numeric_error(os.str());
  }
}

}  // namespace

double throughput_at_ratio(const ChannelConfig& cfg, ProtocolVariant variant,
                           double ratio, Metric metric, double gamma_th,
                           const QuadratureSettings& settings, double* err) {
  if (err) *err = 0.0;
  if (ratio <= 0.0 || ratio >= 1.0) return 0.0;
  const Protocol proto{variant, ratio};
  const EffectiveParams p = effective_params(cfg, proto);
  const CapacityResult c = metric == Metric::ergodic_throughput
                               ? ergodic_capacity(p, settings)
                               : outage_capacity(p, gamma_th);
  const double scale = variant == ProtocolVariant::TS ? 1.0 - ratio : 1.0;
  if (err) *err = scale * c.est_error;
  return throughput(proto, c);
}

SweepResult sweep_ratio(const ChannelConfig& cfg, ProtocolVariant variant,
                        std::span<const double> grid, Metric metric,
                        double gamma_th, const QuadratureSettings& settings) {
  if (grid.empty()) throw std::invalid_argument("sweep_ratio: grid must be non-empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !(grid[i] < 1.0))
      throw std::invalid_argument("sweep_ratio: grid must lie strictly inside (0, 1)");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sweep_ratio: grid must be strictly increasing");
  }

  SweepResult r;
  r.metric = metric;
  r.ratios.assign(grid.begin(), grid.end());
  r.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    r.values[i] = checked_ratio_eval(cfg, variant, grid[i], metric, gamma_th,
                                     settings, nullptr);

  const auto best = std::max_element(r.values.begin(), r.values.end());
  r.max_value = *best;
  r.argmax_ratio = r.ratios[static_cast<std::size_t>(best - r.values.begin())];
  return r;
}

OptimizeResult optimize_ratio(const ChannelConfig& cfg, ProtocolVariant variant,
                              Metric metric, double gamma_th, double tol,
                              const QuadratureSettings& settings) {
  if (!(tol >= 1e-6) || !(tol <= 1e-2))
    throw std::invalid_argument("optimize_ratio: tol must lie in [1e-6, 1e-2]");

  const auto f = [&](double ratio) {
    return checked_ratio_eval(cfg, variant, ratio, metric, gamma_th, settings,
                              nullptr);
  };

  // Coarse bracket scan.
  std::vector<double> xs(kCoarsePoints), vs(kCoarsePoints);
  for (int i = 0; i < kCoarsePoints; ++i) {
    xs[i] = static_cast<double>(i + 1) / (kCoarsePoints + 1);
    vs[i] = f(xs[i]);
  }
  std::size_t best = 0;
  int local_maxima = 0;
  for (int i = 0; i < kCoarsePoints; ++i) {
    if (vs[i] > vs[best]) best = i;
    const bool left_ok = i == 0 || vs[i] > vs[i - 1];
    const bool right_ok = i == kCoarsePoints - 1 || vs[i] > vs[i + 1];
    if (left_ok && right_ok) ++local_maxima;
  }

  OptimizeResult out;
  out.multimodal_flag = local_maxima > 1;
  out.ratio = xs[best];
  out.value = vs[best];

  double lo = best > 0 ? xs[best - 1] : 1e-6;
  double hi = best + 1 < xs.size() ? xs[best + 1] : 1.0 - 1e-6;

  // Golden-section refinement (maximization) down to bracket width tol.
  double u = hi - kGolden * (hi - lo);
  double v = lo + kGolden * (hi - lo);
  double fu = f(u), fv = f(v);
  auto consider = [&out](double x, double val) {
    if (val > out.value) {
      out.value = val;
      out.ratio = x;
    }
  };
  consider(u, fu);
  consider(v, fv);
  while (hi - lo > tol) {
    if (fu < fv) {
      lo = u;
      u = v;
      fu = fv;
      v = lo + kGolden * (hi - lo);
      fv = f(v);
      consider(v, fv);
    } else {
      hi = v;
      v = u;
      fv = fu;
      u = hi - kGolden * (hi - lo);
      fu = f(u);
      consider(u, fu);
    }
  }
  return out;
}

bool majorizes(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("majorizes: vectors must have equal length");
  for (double v : x)
    if (!(v >= 0.0)) throw std::invalid_argument("majorizes: entries must be >= 0");
  for (double v : y)
    if (!(v >= 0.0)) throw std::invalid_argument("majorizes: entries must be >= 0");

  std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end(), std::greater<>());
  std::sort(ys.begin(), ys.end(), std::greater<>());

  const double total_x = std::accumulate(xs.begin(), xs.end(), 0.0);
  const double total_y = std::accumulate(ys.begin(), ys.end(), 0.0);
  const double scale = std::max({total_x, total_y, 1e-300});
  if (std::abs(total_x - total_y) > 1e-9 * scale) return false;

  const double slack = 1e-12 * std::max(scale, 1.0);
  double px = 0.0, py = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    px += xs[k];
    py += ys[k];
    if (px < py - slack) return false;
  }
  return true;
}

SchurReport schur_order_check(const ChannelConfig& cfg_template,
                              const std::vector<std::vector<double>>& mu_vectors,
                              const Protocol& proto, Metric metric,
                              double gamma_th,
                              const QuadratureSettings& settings) {
  cfg_template.validate();
  double aggregate = 0.0;
  for (std::size_t i = 0; i < cfg_template.interferer_count(); ++i)
    aggregate += cfg_template.interferer_powers[i] * cfg_template.mean_gain_interferers[i];
  if (!(aggregate > 0.0))
    throw std::invalid_argument(
        "schur_order_check: the template must carry interferers to define the "
        "aggregate power");

  const std::size_t n = mu_vectors.size();
  if (n > 0) {
    const std::size_t len = mu_vectors.front().size();
    for (const auto& v : mu_vectors) {
      if (v.size() != len)
        throw std::invalid_argument("schur_order_check: vectors must have equal length");
      for (double e : v)
        if (!(e >= 0.0))
          throw std::invalid_argument("schur_order_check: entries must be >= 0");
      if (!(std::accumulate(v.begin(), v.end(), 0.0) > 0.0))
        throw std::invalid_argument("schur_order_check: vectors must not be all zero");
    }
  }

  SchurReport report;
  report.metric_values.resize(n);
  std::vector<double> errors(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = mu_vectors[i];
    const double vsum = std::accumulate(v.begin(), v.end(), 0.0);
    ChannelConfig cfg = cfg_template;
    cfg.interferer_powers.clear();
    cfg.mean_gain_interferers.clear();
    for (double e : v) {
      if (e > 0.0) {
        cfg.interferer_powers.push_back(e / vsum * aggregate);
        cfg.mean_gain_interferers.push_back(1.0);
      }
    }
    report.metric_values[i] = checked_ratio_eval(
        cfg, proto.variant, proto.ratio, metric, gamma_th, settings, &errors[i]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t hi, lo;
      if (majorizes(mu_vectors[i], mu_vectors[j])) {
        hi = i;
        lo = j;
      } else if (majorizes(mu_vectors[j], mu_vectors[i])) {
        hi = j;
        lo = i;
      } else {
        report.incomparable.emplace_back(i, j);
        continue;
      }
      SchurComparison cmp;
      cmp.hi_index = hi;
      cmp.lo_index = lo;
      cmp.hi_value = report.metric_values[hi];
      cmp.lo_value = report.metric_values[lo];
      cmp.tolerance = 1e-6 + errors[hi] + errors[lo];
      cmp.holds = cmp.hi_value >= cmp.lo_value - cmp.tolerance;
      if (!cmp.holds) report.all_hold = false;
      report.comparisons.push_back(cmp);
    }
  }
  return report;
}

}  // namespace ehrelay
