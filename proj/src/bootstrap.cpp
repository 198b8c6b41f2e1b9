#include "sgcauc/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sgcauc/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sgcauc {

namespace {

bool is_degenerate(const WeightedSample& sample, std::span<const double> w) {
  bool has_case = false, has_control = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    (sample.y()[i] == 1 ? has_case : has_control) = true;
  }
  return !(has_case && has_control);
}

void fill_iid(const WeightedSample& sample, ReplicateWeights& out, Rng& rng) {
  const std::size_t n = sample.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<int> counts(n);
  for (std::size_t b = 0; b < out.count(); ++b) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t k = 0; k < n; ++k) ++counts[pick(rng)];
    for (std::size_t i = 0; i < n; ++i) out.weights[b * n + i] = sample.weights()[i] * counts[i];
  }
}

void fill_design(const WeightedSample& sample, ReplicateWeights& out, Rng& rng) {
  const std::size_t n = sample.size();
  // stratum -> psu -> record indices; ordered maps keep the draw order stable
  std::map<std::int64_t, std::map<std::int64_t, std::vector<std::size_t>>> layout;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = sample[i];
    layout[*rec.stratum][*rec.psu].push_back(i);
  }
  for (const auto& [stratum, psus] : layout) {
    if (psus.size() == 1) {
      out.warnings.push_back("stratum " + std::to_string(stratum) +
                             " has a single PSU; its weights are carried unchanged");
    }
  }
  for (std::size_t b = 0; b < out.count(); ++b) {
    double* row = out.weights.data() + b * n;
    for (const auto& [stratum, psus] : layout) {
      const std::size_t u = psus.size();
      if (u == 1) {
        for (const std::size_t i : psus.begin()->second) row[i] = sample.weights()[i];
        continue;
      }
      std::vector<int> multiplicity(u, 0);
      std::uniform_int_distribution<std::size_t> pick(0, u - 1);
      for (std::size_t k = 0; k + 1 < u; ++k) ++multiplicity[pick(rng)];
      const double scale = static_cast<double>(u) / static_cast<double>(u - 1);
      std::size_t g = 0;
      for (const auto& [psu, members] : psus) {
        for (const std::size_t i : members) row[i] = sample.weights()[i] * scale * multiplicity[g];
        ++g;
      }
    }
  }
}

}  // namespace

std::size_t ReplicateWeights::degenerate_count() const {
  return static_cast<std::size_t>(std::count(degenerate.begin(), degenerate.end(), 1));
}

ReplicateWeights make_replicates(const WeightedSample& sample, int replicates, Rng& rng,
                                 ResampleMode mode) {
  if (replicates < 1) throw ConfigError("bootstrap needs at least one replicate");
  const bool design = mode == ResampleMode::Design || (mode == ResampleMode::Auto && sample.has_design());
  if (design && !sample.has_design()) {
    throw ConfigError("design bootstrap requested but stratum/psu ids are missing");
  }
  ReplicateWeights out;
  out.n = sample.size();
  out.design = design;
  out.weights.assign(static_cast<std::size_t>(replicates) * out.n, 0.0);
  out.degenerate.assign(static_cast<std::size_t>(replicates), 0);
  if (design) {
    fill_design(sample, out, rng);
  } else {
    fill_iid(sample, out, rng);
  }
  for (std::size_t b = 0; b < out.count(); ++b) out.degenerate[b] = is_degenerate(sample, out.row(b));
  return out;
}

WeightedSample replicate_sample(const WeightedSample& sample, std::span<const double> weights) {
  if (weights.size() != sample.size()) throw ConfigError("replicate weight row has the wrong length");
  std::vector<WeightedRecord> records;
  records.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    WeightedRecord rec = sample[i];
    rec.weight = weights[i];
    records.push_back(rec);
  }
  return WeightedSample(std::move(records));
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw EstimationError("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BootstrapSummary summarize_replicates(double point, std::span<const std::optional<double>> values,
                                      int degenerate_replicates) {
  std::vector<double> usable;
  for (const auto& v : values) {
    if (v) usable.push_back(*v);
  }
  BootstrapSummary s;
  s.point = point;
  s.used = static_cast<int>(usable.size());
  s.degenerate = degenerate_replicates + static_cast<int>(values.size() - usable.size());
  if (usable.size() < 2) {
    throw EstimationError("bootstrap needs at least two usable replicates, got " +
                          std::to_string(usable.size()));
  }
  const double mean = std::accumulate(usable.begin(), usable.end(), 0.0) / static_cast<double>(usable.size());
  double ss = 0.0;
  for (const double v : usable) ss += (v - mean) * (v - mean);
  s.se = std::sqrt(ss / static_cast<double>(usable.size() - 1));
  s.ci_low = percentile(usable, 0.025);
  s.ci_high = percentile(usable, 0.975);
  return s;
}

BootstrapSummary bootstrap_summary(const WeightedSample& sample, const ReplicateWeights& replicates,
                                   const Statistic& statistic) {
  const double point = statistic(sample);
  std::vector<std::optional<double>> values;
  int degenerate = 0;
  for (std::size_t b = 0; b < replicates.count(); ++b) {
    if (replicates.degenerate[b]) {
      ++degenerate;
      continue;
    }
    try {
      values.push_back(statistic(replicate_sample(sample, replicates.row(b))));
    } catch (const EstimationError&) {
      values.emplace_back();
    } catch (const RangeError&) {
      values.emplace_back();
    }
  }
  return summarize_replicates(point, values, degenerate);
}

BundleBootstrap bootstrap_bundle(const WeightedSample& sample, const EstimateBundle& point,
                                 const ReplicateWeights& replicates, int jobs) {
  const std::size_t B = replicates.count();
  std::vector<std::optional<EstimateBundle>> bundles(B);
  EstimateOptions options;
  options.path = KernelPath::Serial;
  options.use_pairwise = false;
  options.tolerate_range_errors = true;
  const auto nb = static_cast<std::ptrdiff_t>(B);
#ifdef _OPENMP
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#else
  (void)jobs;
#endif
  for (std::ptrdiff_t t = 0; t < nb; ++t) {
    const auto b = static_cast<std::size_t>(t);
    if (replicates.degenerate[b]) continue;
    try {
      bundles[b] = estimate_all(replicate_sample(sample, replicates.row(b)), options);
    } catch (const EstimationError&) {
    }
  }

  BundleBootstrap out;
  out.replicates = static_cast<int>(B);
  const int degenerate = static_cast<int>(replicates.degenerate_count());
  auto summarize = [&](const std::optional<double>& p, auto pick) -> std::optional<BootstrapSummary> {
    if (!p) return std::nullopt;
    std::vector<std::optional<double>> values;
    for (std::size_t b = 0; b < B; ++b) {
      if (replicates.degenerate[b]) continue;
      values.push_back(bundles[b] ? pick(*bundles[b]) : std::nullopt);
    }
    try {
      return summarize_replicates(*p, values, degenerate);
    } catch (const EstimationError&) {
      return std::nullopt;
    }
  };
  for (const Estimator e : kAllEstimators) {
    const auto idx = static_cast<std::size_t>(e);
    out.auc[idx] = summarize(point.auc[idx], [&](const EstimateBundle& r) { return r.auc[idx]; });
    out.r2[idx] = summarize(point.r2[idx], [&](const EstimateBundle& r) { return r.r2[idx]; });
  }
  return out;
}

}  // namespace sgcauc
