#include "sgcauc/kernels.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sgcauc::kernels {

namespace {

constexpr std::size_t kRowBlock = 64;

inline double sign(double d) { return static_cast<double>((d > 0.0) - (d < 0.0)); }

inline double pair_weight(const PairInput& in, PairWeightScheme scheme, std::size_t i,
                          std::size_t j) {
  switch (scheme) {
    case PairWeightScheme::Unweighted: return 1.0;
    case PairWeightScheme::TruePairwise: return in.pair_weights[i * in.x.size() + j];
    case PairWeightScheme::ProductOfSingles: return in.weight[i] * in.weight[j];
  }
  return 1.0;
}

inline double half_credit(double a, double b) {
  return a > b ? 1.0 : (a == b ? 0.5 : 0.0);
}

PairSums kendall_rows(const PairInput& in, PairWeightScheme scheme, std::size_t begin,
                      std::size_t end) {
  const std::size_t n = in.x.size();
  PairSums s;
  for (std::size_t i = begin; i < end; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = pair_weight(in, scheme, i, j);
      const double dy = static_cast<double>(in.y[i]) - static_cast<double>(in.y[j]);
      s.numerator += v * dy * sign(in.x[i] - in.x[j]);
      s.denominator += v;
    }
  }
  return s;
}

PairSums auc_rows(const PairInput& in, PairWeightScheme scheme, std::size_t begin,
                  std::size_t end) {
  const std::size_t n = in.x.size();
  PairSums s;
  for (std::size_t i = begin; i < end; ++i) {
    if (in.y[i] != 1) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (in.y[j] != 0) continue;
      const double v = pair_weight(in, scheme, i, j);
      s.numerator += v * half_credit(in.x[i], in.x[j]);
      s.denominator += v;
    }
  }
  return s;
}

template <typename RowFn>
PairSums blocked_parallel(std::size_t n, RowFn&& rows) {
  const std::size_t blocks = (n + kRowBlock - 1) / kRowBlock;
  std::vector<PairSums> partial(blocks);
  const auto nblocks = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const auto begin = static_cast<std::size_t>(b) * kRowBlock;
    partial[static_cast<std::size_t>(b)] = rows(begin, std::min(n, begin + kRowBlock));
  }
  PairSums total;
  for (const PairSums& p : partial) {
    total.numerator += p.numerator;
    total.denominator += p.denominator;
  }
  return total;
}

}  // namespace

PairSums kendall_pairs_serial(const PairInput& in, PairWeightScheme scheme) {
  return kendall_rows(in, scheme, 0, in.x.size());
}

PairSums kendall_pairs_parallel(const PairInput& in, PairWeightScheme scheme) {
  return blocked_parallel(in.x.size(), [&](std::size_t begin, std::size_t end) {
    return kendall_rows(in, scheme, begin, end);
  });
}

std::int64_t kendall_unweighted_count(std::span<const std::uint8_t> y,
                                      std::span<const double> x) {
  std::vector<double> controls;
  controls.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] == 0) controls.push_back(x[i]);
  }
  std::sort(controls.begin(), controls.end());
  std::int64_t count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] != 1) continue;
    const auto below = std::lower_bound(controls.begin(), controls.end(), x[i]);
    const auto above = std::upper_bound(below, controls.end(), x[i]);
    count += (below - controls.begin()) - (controls.end() - above);
  }
  return count;
}

PairSums case_control_auc_serial(const PairInput& in, PairWeightScheme scheme) {
  return auc_rows(in, scheme, 0, in.x.size());
}

PairSums case_control_auc_parallel(const PairInput& in, PairWeightScheme scheme) {
  return blocked_parallel(in.x.size(), [&](std::size_t begin, std::size_t end) {
    return auc_rows(in, scheme, begin, end);
  });
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sgcauc::kernels
