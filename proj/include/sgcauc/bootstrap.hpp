#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgcauc/rank_estimators.hpp"
#include "sgcauc/rng.hpp"
#include "sgcauc/sample.hpp"

namespace sgcauc {

enum class ResampleMode {
  Auto,    // design path when every record has stratum and PSU ids
  Design,  // Rao-Wu-Yue rescaled PSU bootstrap within strata
  Iid,     // multinomial record resampling
};

/// B x n replicate weights; row b holds the full weight of every record in
/// replicate b (zero for records not drawn).
struct ReplicateWeights {
  std::size_t n = 0;
  std::vector<double> weights;
  std::vector<std::uint8_t> degenerate;  // per replicate
  bool design = false;
  std::vector<std::string> warnings;

  std::size_t count() const noexcept { return degenerate.size(); }
  std::span<const double> row(std::size_t b) const { return {weights.data() + b * n, n}; }
  std::size_t degenerate_count() const;
};

ReplicateWeights make_replicates(const WeightedSample& sample, int replicates, Rng& rng,
                                 ResampleMode mode = ResampleMode::Auto);

/// Sample with the replicate's weights, keeping only records of positive
/// weight. Pairwise weights are not carried over.
WeightedSample replicate_sample(const WeightedSample& sample, std::span<const double> weights);

struct BootstrapSummary {
  double point = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int used = 0;
  int degenerate = 0;  // degenerate replicates plus replicates where the statistic failed
};

/// Linear-interpolation sample quantile (type 7) of unsorted values.
double percentile(std::vector<double> values, double q);

/// Point estimate, SD and 2.5/97.5 percentiles over the usable replicate values.
/// Throws EstimationError with fewer than two usable replicates.
BootstrapSummary summarize_replicates(double point, std::span<const std::optional<double>> values,
                                      int degenerate_replicates);

using Statistic = std::function<double(const WeightedSample&)>;

/// Bootstrap of an arbitrary statistic. A replicate whose evaluation throws
/// EstimationError or RangeError counts as degenerate.
BootstrapSummary bootstrap_summary(const WeightedSample& sample, const ReplicateWeights& replicates,
                                   const Statistic& statistic);

struct BundleBootstrap {
  int replicates = 0;
  std::array<std::optional<BootstrapSummary>, 6> auc{};
  std::array<std::optional<BootstrapSummary>, 6> r2{};
};

/// Reruns the whole estimation pipeline (prevalence included) per replicate
/// and summarizes every AUC and R^2 entry present in `point`. Entries with
/// fewer than two usable replicates are left empty. `jobs` bounds OpenMP threads.
BundleBootstrap bootstrap_bundle(const WeightedSample& sample, const EstimateBundle& point,
                                 const ReplicateWeights& replicates, int jobs = 0);

}  // namespace sgcauc
