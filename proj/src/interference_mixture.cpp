#include "ehrelay/interference_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ehrelay/errors.hpp"
#include "ehrelay/special_functions.hpp"

namespace ehrelay {
namespace {

constexpr double kCoefficientLimit = 1e12;
constexpr double kSumTolerance = 1e-9;

double ipow(double base, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

}  // namespace

double CharDecomp::coefficient_sum() const {
  double s = 0.0;
  for (const auto& row : coefficients)
    for (double c : row) s += c;
  return s;
}

CharDecomp characteristic_decomposition(std::span<const double> means,
                                        double merge_tolerance) {
  if (!(merge_tolerance > 0.0) || merge_tolerance > 1e-3)
    throw std::invalid_argument(
        "characteristic_decomposition: merge_tolerance must lie in (0, 1e-3]");
  for (double m : means)
    if (!(m > 0.0) || !std::isfinite(m))
      throw std::domain_error(
          "characteristic_decomposition: means must be positive and finite");

  CharDecomp d;
  d.source_means.assign(means.begin(), means.end());
  if (means.empty()) return d;

  std::vector<double> sorted(means.begin(), means.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // Cluster descending-sorted means; the group representative is the
  // running mean of its members, so the result is permutation-invariant.
  std::vector<double> group_sum;
  std::vector<int> group_count;
  for (double m : sorted) {
    if (!group_sum.empty()) {
      const double rep = group_sum.back() / group_count.back();
      if (rep - m <= merge_tolerance * rep) {
        group_sum.back() += m;
        ++group_count.back();
        continue;
      }
    }
    group_sum.push_back(m);
    group_count.push_back(1);
  }

  const std::size_t v = group_sum.size();
  d.distinct_means.resize(v);
  d.multiplicities.assign(group_count.begin(), group_count.end());
  for (std::size_t i = 0; i < v; ++i)
    d.distinct_means[i] = group_sum[i] / group_count[i];

  // chi[i][j] from the Taylor expansion of the deflated transform at the
  // i-th pole: with G(u) = prod_{k != i} (1 - mu_k/mu_i + (mu_k/mu_i) u)^(-tau_k)
  // and G(u) = sum_m c_m u^m, chi[i][j] = c_{tau_i - j}. The c_m follow the
  // log-derivative recurrence with power sums of mu_k / (mu_i - mu_k).
  d.coefficients.resize(v);
  for (std::size_t i = 0; i < v; ++i) {
    const double mi = d.distinct_means[i];
    const int ti = d.multiplicities[i];

    double c0 = 1.0;
    for (std::size_t k = 0; k < v; ++k) {
      if (k == i) continue;
      c0 *= ipow(mi / (mi - d.distinct_means[k]), d.multiplicities[k]);
    }

    std::vector<double> c{c0};
    if (ti > 1) {
      std::vector<double> h(ti - 1);
      for (int r = 0; r + 1 < ti; ++r) {
        double power_sum = 0.0;
        for (std::size_t k = 0; k < v; ++k) {
          if (k == i) continue;
          const double ratio = d.distinct_means[k] / (mi - d.distinct_means[k]);
          power_sum += d.multiplicities[k] * ipow(ratio, r + 1);
        }
        h[r] = (r % 2 == 0) ? -power_sum : power_sum;
      }
      for (int m = 0; m + 1 < ti; ++m) {
        double acc = 0.0;
        for (int l = 0; l <= m; ++l) acc += c[l] * h[m - l];
        c.push_back(acc / (m + 1));
      }
    }

    auto& chi = d.coefficients[i];
    chi.resize(ti);
    for (int j = 1; j <= ti; ++j) chi[j - 1] = c[ti - j];
  }

  for (const auto& row : d.coefficients)
    for (double chi : row)
      if (!(std::abs(chi) <= kCoefficientLimit)) {
        std::ostringstream os;
        os << "characteristic_decomposition: coefficient magnitude " << std::abs(chi)
           << " exceeds " << kCoefficientLimit
           << "; nearly-equal means need a wider merge_tolerance";
        throw conditioning_error(os.str());
      }

  const double sum = d.coefficient_sum();
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os << "characteristic_decomposition: coefficient sum " << sum
       << " deviates from 1; the decomposition is ill-conditioned";
    throw conditioning_error(os.str());
  }
  return d;
}

double mixture_pdf(const CharDecomp& decomp, double y) {
  if (!(y >= 0.0)) throw std::domain_error("mixture_pdf: requires y >= 0");
  if (decomp.empty()) return 0.0;
  double f = 0.0;
  for (std::size_t i = 0; i < decomp.distinct_means.size(); ++i) {
    const double mu = decomp.distinct_means[i];
    const double decay = std::exp(-y / mu);
    double term = 1.0 / mu;  // mu^-j y^(j-1) / (j-1)! at j = 1
    for (int j = 1; j <= decomp.multiplicities[i]; ++j) {
      f += decomp.coefficients[i][j - 1] * term * decay;
      term *= y / (mu * j);
    }
  }
  return f > 0.0 ? f : 0.0;
}

double mixture_cdf(const CharDecomp& decomp, double y) {
  if (!(y >= 0.0)) throw std::domain_error("mixture_cdf: requires y >= 0");
  if (decomp.empty()) return 1.0;
  double f = 0.0;
  for (std::size_t i = 0; i < decomp.distinct_means.size(); ++i) {
    const double ratio = y / decomp.distinct_means[i];
    for (int j = 1; j <= decomp.multiplicities[i]; ++j)
      f += decomp.coefficients[i][j - 1] * detail::regularized_gamma_p_int(j, ratio);
  }
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace ehrelay
