#pragma once

#include <cstdint>
#include <span>

namespace sgcauc {

enum class PairWeightScheme { Unweighted, TruePairwise, ProductOfSingles };

namespace kernels {

/// Column view of a weighted sample as consumed by the pair kernels.
/// `pair_weights` is a row-major n x n matrix (may be empty unless the
/// TruePairwise scheme is requested).
struct PairInput {
  std::span<const std::uint8_t> y;
  std::span<const double> x;
  std::span<const double> weight;
  std::span<const double> pair_weights;
};

/// Numerator and normalizer of a pair-weighted ratio estimator.
struct PairSums {
  double numerator = 0.0;
  double denominator = 0.0;

  double ratio() const { return numerator / denominator; }
};

/// Sum over i < j of v_ij (y_i - y_j) sgn(x_i - x_j) and of v_ij.
/// Straight double loop; the reference every other path is tested against.
PairSums kendall_pairs_serial(const PairInput& in, PairWeightScheme scheme);

/// Same sums as kendall_pairs_serial, OpenMP over fixed row blocks. Block
/// partials are reduced in block order, so the result does not depend on the
/// thread count.
PairSums kendall_pairs_parallel(const PairInput& in, PairWeightScheme scheme);

/// Unweighted Kendall numerator in O(n log n): (#case-above-control pairs)
/// minus (#case-below-control pairs). Exact integer arithmetic.
std::int64_t kendall_unweighted_count(std::span<const std::uint8_t> y,
                                      std::span<const double> x);

/// Sum over (case i, control j) of v_ij h(x_i, x_j) and of v_ij, with
/// h(a, b) = I(a > b) + I(a == b) / 2.
PairSums case_control_auc_serial(const PairInput& in, PairWeightScheme scheme);
PairSums case_control_auc_parallel(const PairInput& in, PairWeightScheme scheme);

/// Number of threads the parallel kernels would use.
int max_threads();

}  // namespace kernels
}  // namespace sgcauc
