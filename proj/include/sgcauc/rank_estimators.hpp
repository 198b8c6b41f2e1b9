#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgcauc/kernels.hpp"
#include "sgcauc/sample.hpp"

namespace sgcauc {

enum class Subset { All, Cases, Controls };

/// Right-continuous weighted step function t -> sum w_i I(x_i <= t) / sum w_i.
class WeightedEcdf {
 public:
  WeightedEcdf(std::span<const double> values, std::span<const double> weights);

  double operator()(double t) const;

 private:
  std::vector<double> knots_;  // distinct values, ascending
  std::vector<double> levels_; // ECDF value at each knot
};

/// HT estimate of the prevalence, clamped to [1/(2n), 1 - 1/(2n)].
double weighted_prevalence(const WeightedSample& sample);

WeightedEcdf weighted_ecdf(const WeightedSample& sample, Subset subset);

/// Smallest value v with weighted ECDF(v) >= 1/2.
double weighted_median(std::span<const double> values, std::span<const double> weights);

/// Which pair kernel computes the O(n^2) sums.
enum class KernelPath { Serial, Parallel };

double kendall_tau_hat(const WeightedSample& sample, PairWeightScheme scheme,
                       KernelPath path = KernelPath::Parallel);

/// O(n log n) unweighted Kendall tau; agrees with the pair loop to rounding.
double kendall_tau_hat_fast(const WeightedSample& sample);

double wilcoxon_hat(const WeightedSample& sample);

/// How F_hat_X is evaluated at a record's own value.
enum class EcdfConvention {
  Right,  // sum w_j I(x_j <= x_i) / sum w_j
  Mid,    // average of the left and right limits; mean exactly 1/2
};

/// 12 sum w_i F_Y(y_i) F_X(x_i) / sum w_i - 3 with F_Y(0) = 1 - p_hat,
/// F_Y(1) = 1. The right-continuous form carries an O(1/n) upward shift that
/// the AUC map divides by 12 p^2 (1 - p); Mid removes it.
double spearman_hat(const WeightedSample& sample, EcdfConvention convention = EcdfConvention::Mid);
double quadrant_hat(const WeightedSample& sample);

/// Pair-weighted Mann-Whitney AUC over case/control pairs, folded to [0.5, 1].
double pairwise_weighted_auc(const WeightedSample& sample, PairWeightScheme scheme,
                             KernelPath path = KernelPath::Parallel);

/// The six bridged AUC estimators.
enum class Estimator { KendallUw, KendallTw, KendallPw, Wilcoxon, Spearman, Quadrant };

inline constexpr std::array<Estimator, 6> kAllEstimators = {
    Estimator::KendallUw, Estimator::KendallTw, Estimator::KendallPw,
    Estimator::Wilcoxon,  Estimator::Spearman,  Estimator::Quadrant};

std::string_view to_string(Estimator e);
std::optional<Estimator> estimator_from_string(std::string_view name);

struct RankStatistics {
  double kendall_uw = 0.0;
  std::optional<double> kendall_tw;
  double kendall_pw = 0.0;
  double wilcoxon = 0.0;
  double spearman = 0.0;
  double quadrant = 0.0;
};

struct EstimateBundle {
  double p_hat = 0.0;
  RankStatistics stats;
  std::array<std::optional<double>, 6> auc{};  // indexed by Estimator
  std::array<std::optional<double>, 6> r2{};   // Wilcoxon has no R^2 entry
  std::optional<double> auc_pairwise;          // Definition-style AUC with true pairwise weights
  std::vector<std::string> failures;           // range errors swallowed under tolerate_range_errors

  std::optional<double> auc_of(Estimator e) const { return auc[static_cast<int>(e)]; }
  std::optional<double> r2_of(Estimator e) const { return r2[static_cast<int>(e)]; }
};

struct EstimateOptions {
  KernelPath path = KernelPath::Parallel;
  /// Skip the R^2 inversions (the scenario grid only needs AUCs).
  bool compute_r2 = true;
  /// Use true pairwise weights when the sample carries them.
  bool use_pairwise = true;
  /// Leave an entry empty (and note it in `failures`) instead of throwing
  /// when its statistic is out of the attainable range.
  bool tolerate_range_errors = false;
};

/// Every rank statistic, AUC and latent R^2 estimate for a sample. Range
/// errors from bridging are rethrown with the estimator name prefixed.
EstimateBundle estimate_all(const WeightedSample& sample, const EstimateOptions& options = {});

}  // namespace sgcauc
