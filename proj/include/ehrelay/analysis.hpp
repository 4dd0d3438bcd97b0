#ifndef EHRELAY_ANALYSIS_HPP
#define EHRELAY_ANALYSIS_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ehrelay/capacity_metrics.hpp"

namespace ehrelay {

enum class Metric { ergodic_throughput, outage_throughput };

/// Throughput of the chosen metric at one harvesting ratio. Ratios at or
/// beyond the (0, 1) endpoints return zero without touching the analytic
/// machinery. err, when non-null, receives the propagated error bound.
double throughput_at_ratio(const ChannelConfig&, ProtocolVariant, double ratio,
                           Metric, double gamma_th,
                           const QuadratureSettings& settings = {},
                           double* err = nullptr);

struct SweepResult {
  std::vector<double> ratios;
  std::vector<double> values;
  Metric metric = Metric::ergodic_throughput;
  double argmax_ratio = 0.0;
  double max_value = 0.0;
};

/// Evaluates the throughput on a strictly increasing ratio grid inside
/// (0, 1). Numeric failures are rethrown with the offending ratio named.
SweepResult sweep_ratio(const ChannelConfig&, ProtocolVariant,
                        std::span<const double> grid, Metric, double gamma_th,
                        const QuadratureSettings& settings = {});

struct OptimizeResult {
  double ratio = 0.0;
  double value = 0.0;
  bool multimodal_flag = false;  // coarse scan saw more than one local max
};

/// Coarse 33-point scan to bracket the optimum, then golden-section
/// refinement to a bracket width of tol. The returned value is never
/// below the best coarse-grid sample.
OptimizeResult optimize_ratio(const ChannelConfig&, ProtocolVariant, Metric,
                              double gamma_th, double tol = 1e-4,
                              const QuadratureSettings& settings = {});

/// Majorization partial order: sorts both descending and checks prefix-sum
/// dominance with equal totals (1e-9 relative).
bool majorizes(std::span<const double> x, std::span<const double> y);

struct SchurComparison {
  std::size_t hi_index = 0;  // majorizing vector
  std::size_t lo_index = 0;  // majorized vector
  double hi_value = 0.0;
  double lo_value = 0.0;
  double tolerance = 0.0;  // 1e-6 plus the propagated numeric error
  bool holds = false;
};

struct SchurReport {
  std::vector<double> metric_values;  // one per input vector
  std::vector<SchurComparison> comparisons;
  std::vector<std::pair<std::size_t, std::size_t>> incomparable;
  bool all_hold = true;
};

/// Replaces the template's interferers with each mu-vector (rescaled to
/// the template's aggregate interference power, zero entries dropped),
/// evaluates the metric once per vector, and checks the Schur ordering on
/// every comparable pair.
SchurReport schur_order_check(const ChannelConfig& cfg_template,
                              const std::vector<std::vector<double>>& mu_vectors,
                              const Protocol&, Metric, double gamma_th,
                              const QuadratureSettings& settings = {});

}  // namespace ehrelay

#endif  // EHRELAY_ANALYSIS_HPP
