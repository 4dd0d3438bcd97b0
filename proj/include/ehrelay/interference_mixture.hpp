#ifndef EHRELAY_INTERFERENCE_MIXTURE_HPP
#define EHRELAY_INTERFERENCE_MIXTURE_HPP

#include <span>
#include <vector>

namespace ehrelay {

/// Partial-fraction decomposition of a sum of independent exponential
/// variables into a mixture of Erlang densities. coefficients[i][j-1] is
/// the weight of the order-j term at the i-th distinct mean; the weights
/// of a valid decomposition sum to one. An empty decomposition stands for
/// the empty sum (a point mass at zero). Immutable after construction.
struct CharDecomp {
  std::vector<double> distinct_means;  // strictly decreasing, all > 0
  std::vector<int> multiplicities;
  std::vector<std::vector<double>> coefficients;
  std::vector<double> source_means;  // the original, unsorted input

  std::size_t order() const { return source_means.size(); }
  bool empty() const { return source_means.empty(); }
  double coefficient_sum() const;
};

/// Groups means equal within merge_tolerance (relative) and computes the
/// partial-fraction coefficients of the product of exponential transforms.
/// Throws conditioning_error when nearly-equal unmerged means blow a
/// coefficient past 1e12; widening merge_tolerance is the fix.
CharDecomp characteristic_decomposition(std::span<const double> means,
                                        double merge_tolerance = 1e-9);

/// Density of the sum at y >= 0; tiny negative excursions from
/// cancellation are clamped to zero.
double mixture_pdf(const CharDecomp& decomp, double y);

/// Distribution function of the sum at y >= 0, in [0, 1].
double mixture_cdf(const CharDecomp& decomp, double y);

}  // namespace ehrelay

#endif  // EHRELAY_INTERFERENCE_MIXTURE_HPP
