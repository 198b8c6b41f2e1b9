#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace sgcauc {

enum class RankStatKind { Kendall, Spearman, Quadrant, Wilcoxon };

std::string_view to_string(RankStatKind kind);

/// Which latent half-line the binary median M_Y sits on. The Quadrant bridge
/// depends on it; Auto resolves to M_Y = I(p > 1/2) and refuses p == 1/2.
enum class MedianBranch { Auto, Zero, One };

/// Prevalence p and the latent threshold delta = Phi^{-1}(1 - p). Immutable.
class BridgeContext {
 public:
  explicit BridgeContext(double p, MedianBranch branch = MedianBranch::Auto);

  /// Context built from a sample prevalence, clamped to [1/(2n), 1 - 1/(2n)].
  static BridgeContext from_sample(double p_hat, std::size_t n,
                                   MedianBranch branch = MedianBranch::Auto);

  double p() const noexcept { return p_; }
  double delta() const noexcept { return delta_; }
  MedianBranch branch() const noexcept { return branch_; }

  /// True when the Quadrant bridge uses the M_Y = 1 branch.
  bool median_is_one() const;

 private:
  double p_;
  double delta_;
  MedianBranch branch_;
};

double clamp_prevalence(double p_hat, std::size_t n);

/// Value of the Spearman bridge at r = 0: 6p^2 - 6p + 3.
double spearman_offset(double p);

struct Interval {
  double lower;
  double upper;
  double width() const { return upper - lower; }
};

double bridge_kendall(double r, const BridgeContext& ctx);
double bridge_spearman(double r, const BridgeContext& ctx);
double bridge_quadrant(double r, const BridgeContext& ctx);

/// Dispatch over Kendall/Spearman/Quadrant.
double bridge(RankStatKind kind, double r, const BridgeContext& ctx);

/// d/dr of the bridging function, used to accelerate inversion.
double bridge_derivative(RankStatKind kind, double r, const BridgeContext& ctx);

/// Closed range of attainable population values of a rank statistic.
/// For Wilcoxon this is [-1/2, 1/2].
Interval attainable_range(RankStatKind kind, const BridgeContext& ctx);

/// Fraction of the range width a statistic may overshoot and still be clamped
/// to the boundary instead of raising RangeError.
inline constexpr double kClampTolerance = 0.1;

/// Latent correlation r with bridge(kind, r) == stat_value.
///
/// Safeguarded Newton iteration on the bracket [-1, 1]. Values beyond the
/// attainable range (within kClampTolerance of its width) map to +-1; values
/// further out raise RangeError carrying the attainable interval.
double invert_bridge(RankStatKind kind, double stat_value, const BridgeContext& ctx);

/// Population AUC implied by a rank statistic, clamped to [0.5, 1].
double auc_from_rank(RankStatKind kind, double stat_value, const BridgeContext& ctx);

/// Squared latent correlation implied by a rank correlation (not Wilcoxon).
double latent_r2(RankStatKind kind, double stat_value, const BridgeContext& ctx);

/// |r| whose Kendall bridge yields the given AUC; auc must be in [0.5, 1].
double latent_correlation_from_auc(double auc, const BridgeContext& ctx);

struct CurvePoint {
  double r;
  double auc;
  double r2;
};

/// AUC and latent R^2 along a grid of latent correlations in [0, 1].
std::vector<CurvePoint> auc_latent_curve(const BridgeContext& ctx, std::span<const double> grid);

}  // namespace sgcauc
