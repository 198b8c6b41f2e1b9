#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sgcauc {

/// One observation. `weight` is a Horvitz-Thompson weight (inverse inclusion
/// probability), not the probability itself.
struct WeightedRecord {
  int y = 0;
  double x = 0.0;
  double weight = 1.0;
  std::optional<std::int64_t> stratum;
  std::optional<std::int64_t> psu;
};

/// Symmetric n x n matrix of pairwise HT weights 1 / pi_ij.
class PairwiseWeights {
 public:
  PairwiseWeights() = default;
  PairwiseWeights(std::size_t n, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Validated estimation substrate: at least one case and one control, positive
/// finite weights, finite predictor values. Columns are cached for the kernels.
class WeightedSample {
 public:
  explicit WeightedSample(std::vector<WeightedRecord> records,
                          std::optional<PairwiseWeights> pairwise = std::nullopt);

  std::size_t size() const noexcept { return records_.size(); }
  const std::vector<WeightedRecord>& records() const noexcept { return records_; }
  const WeightedRecord& operator[](std::size_t i) const { return records_[i]; }

  bool has_pairwise() const noexcept { return pairwise_.has_value(); }
  const PairwiseWeights& pairwise() const;

  std::span<const std::uint8_t> y() const noexcept { return y_; }
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> weights() const noexcept { return w_; }

  std::size_t case_count() const noexcept { return cases_; }
  std::size_t control_count() const noexcept { return size() - cases_; }
  bool has_design() const noexcept;

 private:
  std::vector<WeightedRecord> records_;
  std::optional<PairwiseWeights> pairwise_;
  std::vector<std::uint8_t> y_;
  std::vector<double> x_;
  std::vector<double> w_;
  std::size_t cases_ = 0;
};

}  // namespace sgcauc
