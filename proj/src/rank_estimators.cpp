#include "sgcauc/rank_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sgcauc/bridging.hpp"
#include "sgcauc/errors.hpp"

namespace sgcauc {

namespace {

double raw_prevalence(const WeightedSample& s) {
  double cases = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    total += s.weights()[i];
    if (s.y()[i] == 1) cases += s.weights()[i];
  }
  return cases / total;
}

// F_hat(x_i) for every record, with F_hat the all-sample weighted ECDF. The
// mid variant subtracts half the weight tied at x_i (own record included).
std::vector<double> ecdf_at_records(std::span<const double> x, std::span<const double> w,
                                    bool mid = false) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  std::vector<double> out(n);
  double cumulative = 0.0;
  std::size_t k = 0;
  while (k < n) {
    std::size_t end = k;
    double tied = 0.0;
    while (end < n && x[order[end]] == x[order[k]]) tied += w[order[end++]];
    cumulative += tied;
    const double level = mid ? cumulative - 0.5 * tied : cumulative;
    for (std::size_t t = k; t < end; ++t) out[order[t]] = level / total;
    k = end;
  }
  return out;
}

kernels::PairInput pair_input(const WeightedSample& s) {
  kernels::PairInput in{s.y(), s.x(), s.weights(), {}};
  if (s.has_pairwise()) in.pair_weights = s.pairwise().values();
  return in;
}

void require_scheme(const WeightedSample& s, PairWeightScheme scheme) {
  if (scheme == PairWeightScheme::TruePairwise && !s.has_pairwise()) {
    throw ConfigError("true pairwise weighting requested but the sample has no pairwise weights");
  }
}

template <typename Fn>
double tagged(Estimator e, const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const RangeError& err) {
    throw RangeError(std::string(what) + "[" + std::string(to_string(e)) + "]: " + err.what(),
                     err.value(), err.lower(), err.upper());
  }
}

}  // namespace

WeightedEcdf::WeightedEcdf(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw EstimationError("weighted ECDF of an empty subset");
  if (values.size() != weights.size()) throw ConfigError("values and weights differ in length");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double cumulative = 0.0;
  for (const std::size_t i : order) {
    cumulative += weights[i];
    if (!knots_.empty() && knots_.back() == values[i]) {
      levels_.back() = cumulative / total;
    } else {
      knots_.push_back(values[i]);
      levels_.push_back(cumulative / total);
    }
  }
  levels_.back() = 1.0;
}

double WeightedEcdf::operator()(double t) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) return 0.0;
  return levels_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

double weighted_prevalence(const WeightedSample& sample) {
  return clamp_prevalence(raw_prevalence(sample), sample.size());
}

WeightedEcdf weighted_ecdf(const WeightedSample& sample, Subset subset) {
  std::vector<double> values;
  std::vector<double> weights;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const bool keep = subset == Subset::All ||
                      (subset == Subset::Cases) == (sample.y()[i] == 1);
    if (!keep) continue;
    values.push_back(sample.x()[i]);
    weights.push_back(sample.weights()[i]);
  }
  return WeightedEcdf(values, weights);
}

double weighted_median(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw EstimationError("weighted median of an empty set");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cumulative += weights[order[k]];
    const bool group_end = k + 1 == order.size() || values[order[k + 1]] != values[order[k]];
    if (group_end && cumulative >= 0.5 * total) return values[order[k]];
  }
  return values[order.back()];
}

double kendall_tau_hat(const WeightedSample& sample, PairWeightScheme scheme, KernelPath path) {
  if (sample.size() < 2) throw EstimationError("Kendall's tau needs at least two records");
  require_scheme(sample, scheme);
  const auto in = pair_input(sample);
  const auto sums = path == KernelPath::Serial ? kernels::kendall_pairs_serial(in, scheme)
                                               : kernels::kendall_pairs_parallel(in, scheme);
  return sums.ratio();
}

double kendall_tau_hat_fast(const WeightedSample& sample) {
  const auto n = static_cast<double>(sample.size());
  const auto count = kernels::kendall_unweighted_count(sample.y(), sample.x());
  return static_cast<double>(count) / (n * (n - 1.0) / 2.0);
}

double wilcoxon_hat(const WeightedSample& sample) {
  const auto f = ecdf_at_records(sample.x(), sample.weights());
  double case_sum = 0.0, case_w = 0.0, ctrl_sum = 0.0, ctrl_w = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double w = sample.weights()[i];
    if (sample.y()[i] == 1) {
      case_sum += w * f[i];
      case_w += w;
    } else {
      ctrl_sum += w * f[i];
      ctrl_w += w;
    }
  }
  return case_sum / case_w - ctrl_sum / ctrl_w;
}

double spearman_hat(const WeightedSample& sample, EcdfConvention convention) {
  const auto f = ecdf_at_records(sample.x(), sample.weights(), convention == EcdfConvention::Mid);
  const double fy0 = 1.0 - raw_prevalence(sample);
  double acc = 0.0, total = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double w = sample.weights()[i];
    const double fy = sample.y()[i] == 1 ? 1.0 : fy0;
    acc += w * fy * f[i];
    total += w;
  }
  return 12.0 * acc / total - 3.0;
}

double quadrant_hat(const WeightedSample& sample) {
  const double median_y = raw_prevalence(sample) > 0.5 ? 1.0 : 0.0;
  const double median_x = weighted_median(sample.x(), sample.weights());
  double acc = 0.0, total = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double w = sample.weights()[i];
    const double dy = sample.y()[i] - median_y;
    const double dx = sample.x()[i] - median_x;
    acc += w * static_cast<double>((dy * dx > 0.0) - (dy * dx < 0.0));
    total += w;
  }
  return acc / total;
}

double pairwise_weighted_auc(const WeightedSample& sample, PairWeightScheme scheme,
                             KernelPath path) {
  require_scheme(sample, scheme);
  const auto in = pair_input(sample);
  const auto sums = path == KernelPath::Serial ? kernels::case_control_auc_serial(in, scheme)
                                               : kernels::case_control_auc_parallel(in, scheme);
  const double value = sums.ratio();
  return std::max(value, 1.0 - value);
}

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::KendallUw: return "Kuw";
    case Estimator::KendallTw: return "Ktw";
    case Estimator::KendallPw: return "Kpw";
    case Estimator::Wilcoxon: return "W";
    case Estimator::Spearman: return "S";
    case Estimator::Quadrant: return "Q";
  }
  return "?";
}

std::optional<Estimator> estimator_from_string(std::string_view name) {
  for (const Estimator e : kAllEstimators) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

EstimateBundle estimate_all(const WeightedSample& sample, const EstimateOptions& options) {
  EstimateBundle out;
  const double p_raw = raw_prevalence(sample);
  out.p_hat = clamp_prevalence(p_raw, sample.size());
  const BridgeContext ctx(out.p_hat, p_raw > 0.5 ? MedianBranch::One : MedianBranch::Zero);

  RankStatistics& st = out.stats;
  st.kendall_uw = kendall_tau_hat_fast(sample);
  st.kendall_pw = kendall_tau_hat(sample, PairWeightScheme::ProductOfSingles, options.path);
  const bool true_pairwise = options.use_pairwise && sample.has_pairwise();
  if (true_pairwise) {
    st.kendall_tw = kendall_tau_hat(sample, PairWeightScheme::TruePairwise, options.path);
    out.auc_pairwise = pairwise_weighted_auc(sample, PairWeightScheme::TruePairwise, options.path);
  }
  st.wilcoxon = wilcoxon_hat(sample);
  st.spearman = spearman_hat(sample);
  st.quadrant = quadrant_hat(sample);

  auto set = [&](Estimator e, RankStatKind kind, double stat) {
    const auto idx = static_cast<std::size_t>(e);
    try {
      out.auc[idx] = tagged(e, "auc", [&] { return auc_from_rank(kind, stat, ctx); });
      if (options.compute_r2 && kind != RankStatKind::Wilcoxon) {
        out.r2[idx] = tagged(e, "r2", [&] { return latent_r2(kind, stat, ctx); });
      }
    } catch (const RangeError& err) {
      if (!options.tolerate_range_errors) throw;
      out.auc[idx].reset();
      out.r2[idx].reset();
      out.failures.emplace_back(err.what());
    }
  };
  set(Estimator::KendallUw, RankStatKind::Kendall, st.kendall_uw);
  if (st.kendall_tw) set(Estimator::KendallTw, RankStatKind::Kendall, *st.kendall_tw);
  set(Estimator::KendallPw, RankStatKind::Kendall, st.kendall_pw);
  set(Estimator::Wilcoxon, RankStatKind::Wilcoxon, st.wilcoxon);
  set(Estimator::Spearman, RankStatKind::Spearman, st.spearman);
  set(Estimator::Quadrant, RankStatKind::Quadrant, st.quadrant);
  return out;
}

}  // namespace sgcauc
