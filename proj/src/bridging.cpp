#include "sgcauc/bridging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sgcauc/errors.hpp"
#include "sgcauc/normal.hpp"

namespace sgcauc {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
constexpr int kMaxIterations = 200;
constexpr double kStepTolerance = 1e-15;

void check_correlation(double r) {
  if (!(std::abs(r) <= 1.0)) throw DomainError("latent correlation must lie in [-1, 1]");
}

[[noreturn]] void throw_out_of_range(RankStatKind kind, double value, const Interval& range) {
  std::ostringstream msg;
  msg.precision(12);
  msg << to_string(kind) << " statistic " << value << " outside attainable range ["
      << range.lower << ", " << range.upper << "]";
  throw RangeError(msg.str(), value, range.lower, range.upper);
}

// Returns the statistic pulled inside the attainable range, or throws when the
// overshoot exceeds the clamp tolerance.
double clamp_to_range(RankStatKind kind, double value, const Interval& range) {
  if (!std::isfinite(value)) throw_out_of_range(kind, value, range);
  const double slack = kClampTolerance * range.width();
  if (value > range.upper) {
    if (value - range.upper > slack) throw_out_of_range(kind, value, range);
    return range.upper;
  }
  if (value < range.lower) {
    if (range.lower - value > slack) throw_out_of_range(kind, value, range);
    return range.lower;
  }
  return value;
}

double fold_auc(double excess) {
  return std::clamp(0.5 + std::abs(excess), 0.5, 1.0);
}

}  // namespace

std::string_view to_string(RankStatKind kind) {
  switch (kind) {
    case RankStatKind::Kendall: return "kendall";
    case RankStatKind::Spearman: return "spearman";
    case RankStatKind::Quadrant: return "quadrant";
    case RankStatKind::Wilcoxon: return "wilcoxon";
  }
  return "unknown";
}

BridgeContext::BridgeContext(double p, MedianBranch branch) : p_(p), branch_(branch) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("prevalence must lie in (0, 1)");
  delta_ = std_normal_quantile(1.0 - p);
}

BridgeContext BridgeContext::from_sample(double p_hat, std::size_t n, MedianBranch branch) {
  return BridgeContext(clamp_prevalence(p_hat, n), branch);
}

bool BridgeContext::median_is_one() const {
  switch (branch_) {
    case MedianBranch::Zero: return false;
    case MedianBranch::One: return true;
    case MedianBranch::Auto: break;
  }
  if (p_ == 0.5) {
    throw DomainError(
        "quadrant bridge is ambiguous at p = 0.5; choose the median branch explicitly");
  }
  return p_ > 0.5;
}

double clamp_prevalence(double p_hat, std::size_t n) {
  if (n == 0) throw DomainError("clamp_prevalence: empty sample");
  const double edge = 1.0 / (2.0 * static_cast<double>(n));
  return std::clamp(p_hat, edge, 1.0 - edge);
}

double spearman_offset(double p) { return 6.0 * p * p - 6.0 * p + 3.0; }

double bridge_kendall(double r, const BridgeContext& ctx) {
  check_correlation(r);
  return 4.0 * bivariate_normal_cdf(ctx.delta(), 0.0, r * kInvSqrt2) -
         2.0 * std_normal_cdf(ctx.delta());
}

double bridge_spearman(double r, const BridgeContext& ctx) {
  check_correlation(r);
  const double p = ctx.p();
  return 12.0 * p * bivariate_normal_cdf(0.0, -ctx.delta(), r * kInvSqrt2) + 3.0 - 6.0 * p;
}

double bridge_quadrant(double r, const BridgeContext& ctx) {
  check_correlation(r);
  const double a = ctx.median_is_one() ? ctx.delta() : -ctx.delta();
  return bivariate_normal_cdf(a, 0.0, r) - bivariate_normal_cdf(a, 0.0, -r);
}

double bridge(RankStatKind kind, double r, const BridgeContext& ctx) {
  switch (kind) {
    case RankStatKind::Kendall: return bridge_kendall(r, ctx);
    case RankStatKind::Spearman: return bridge_spearman(r, ctx);
    case RankStatKind::Quadrant: return bridge_quadrant(r, ctx);
    case RankStatKind::Wilcoxon: break;
  }
  throw std::invalid_argument("no bridging function for the Wilcoxon statistic");
}

double bridge_derivative(RankStatKind kind, double r, const BridgeContext& ctx) {
  check_correlation(r);
  if (std::abs(r) == 1.0 && kind == RankStatKind::Quadrant) return 0.0;
  switch (kind) {
    case RankStatKind::Kendall:
      return 4.0 * kInvSqrt2 * bivariate_normal_pdf(ctx.delta(), 0.0, r * kInvSqrt2);
    case RankStatKind::Spearman:
      return 12.0 * ctx.p() * kInvSqrt2 *
             bivariate_normal_pdf(0.0, -ctx.delta(), r * kInvSqrt2);
    case RankStatKind::Quadrant: {
      const double a = ctx.median_is_one() ? ctx.delta() : -ctx.delta();
      return bivariate_normal_pdf(a, 0.0, r) + bivariate_normal_pdf(a, 0.0, -r);
    }
    case RankStatKind::Wilcoxon: break;
  }
  throw std::invalid_argument("no bridging function for the Wilcoxon statistic");
}

Interval attainable_range(RankStatKind kind, const BridgeContext& ctx) {
  const double p = ctx.p();
  switch (kind) {
    case RankStatKind::Wilcoxon: return {-0.5, 0.5};
    case RankStatKind::Kendall: return {-2.0 * p * (1.0 - p), 2.0 * p * (1.0 - p)};
    case RankStatKind::Spearman: {
      const double half = 6.0 * p * p * (1.0 - p);
      return {spearman_offset(p) - half, spearman_offset(p) + half};
    }
    case RankStatKind::Quadrant: {
      const double m = std::min(p, 1.0 - p);
      return {-m, m};
    }
  }
  return {bridge(kind, -1.0, ctx), bridge(kind, 1.0, ctx)};
}

double invert_bridge(RankStatKind kind, double stat_value, const BridgeContext& ctx) {
  if (kind == RankStatKind::Wilcoxon) {
    throw std::invalid_argument("the Wilcoxon statistic has no bridging inverse");
  }
  const Interval range = attainable_range(kind, ctx);
  const double target = clamp_to_range(kind, stat_value, range);
  if (target >= range.upper) return 1.0;
  if (target <= range.lower) return -1.0;
  if (bridge(kind, 0.0, ctx) == target) return 0.0;

  // Start from the chord between the endpoints; G is strictly increasing.
  double lo = -1.0;
  double hi = 1.0;
  double r = std::clamp(-1.0 + 2.0 * (target - range.lower) / range.width(), -0.999, 0.999);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const double f = bridge(kind, r, ctx) - target;
    if (f == 0.0) return r;
    if (f < 0.0) {
      lo = r;
    } else {
      hi = r;
    }
    const double slope = bridge_derivative(kind, r, ctx);
    double next = slope > 0.0 ? r - f / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= kStepTolerance || hi - lo <= kStepTolerance) return next;
    r = next;
  }
  return r;
}

double auc_from_rank(RankStatKind kind, double stat_value, const BridgeContext& ctx) {
  const double p = ctx.p();
  const double kendall_scale = 4.0 * p * (1.0 - p);
  switch (kind) {
    case RankStatKind::Wilcoxon: {
      const double w = clamp_to_range(kind, stat_value, attainable_range(kind, ctx));
      return fold_auc(w);
    }
    case RankStatKind::Kendall: {
      const double rk = clamp_to_range(kind, stat_value, attainable_range(kind, ctx));
      return fold_auc(rk / kendall_scale);
    }
    case RankStatKind::Spearman: {
      const double rs = clamp_to_range(kind, stat_value, attainable_range(kind, ctx));
      return fold_auc((rs - spearman_offset(p)) / (12.0 * p * p * (1.0 - p)));
    }
    case RankStatKind::Quadrant: {
      const double r = invert_bridge(kind, stat_value, ctx);
      return fold_auc(bridge_kendall(r, ctx) / kendall_scale);
    }
  }
  throw std::invalid_argument("unknown rank statistic");
}

double latent_r2(RankStatKind kind, double stat_value, const BridgeContext& ctx) {
  const double r = invert_bridge(kind, stat_value, ctx);
  return std::min(1.0, r * r);
}

double latent_correlation_from_auc(double auc, const BridgeContext& ctx) {
  if (!(auc >= 0.5 && auc <= 1.0)) throw DomainError("AUC must lie in [0.5, 1]");
  const double p = ctx.p();
  return invert_bridge(RankStatKind::Kendall, (2.0 * auc - 1.0) * 2.0 * p * (1.0 - p), ctx);
}

std::vector<CurvePoint> auc_latent_curve(const BridgeContext& ctx,
                                         std::span<const double> grid) {
  std::vector<CurvePoint> curve;
  curve.reserve(grid.size());
  for (const double r : grid) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("curve grid values must lie in [0, 1]");
    const double auc = auc_from_rank(RankStatKind::Kendall, bridge_kendall(r, ctx), ctx);
    curve.push_back({r, auc, r * r});
  }
  return curve;
}

}  // namespace sgcauc
