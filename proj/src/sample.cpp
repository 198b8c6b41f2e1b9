#include "sgcauc/sample.hpp"

#include <cmath>
#include <string>

#include "sgcauc/errors.hpp"

namespace sgcauc {

PairwiseWeights::PairwiseWeights(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != n_ * n_) throw ConfigError("pairwise weights must be an n x n matrix");
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double v = values_[i * n_ + j];
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError("pairwise weights must be positive and finite");
      }
      if (v != values_[j * n_ + i]) throw ConfigError("pairwise weights must be symmetric");
    }
  }
}

WeightedSample::WeightedSample(std::vector<WeightedRecord> records,
                               std::optional<PairwiseWeights> pairwise)
    : records_(std::move(records)), pairwise_(std::move(pairwise)) {
  if (pairwise_ && pairwise_->size() != records_.size()) {
    throw ConfigError("pairwise weight dimension does not match the record count");
  }
  y_.reserve(records_.size());
  x_.reserve(records_.size());
  w_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const WeightedRecord& r = records_[i];
    if (r.y != 0 && r.y != 1) {
      throw DataError("record " + std::to_string(i) + ": outcome must be 0 or 1");
    }
    if (!std::isfinite(r.x)) throw DataError("record " + std::to_string(i) + ": x not finite");
    if (!(r.weight > 0.0) || !std::isfinite(r.weight)) {
      throw DataError("record " + std::to_string(i) + ": weight must be positive and finite");
    }
    y_.push_back(static_cast<std::uint8_t>(r.y));
    x_.push_back(r.x);
    w_.push_back(r.weight);
    cases_ += static_cast<std::size_t>(r.y);
  }
  if (cases_ == 0 || cases_ == records_.size()) {
    throw EstimationError("sample needs at least one case and one control");
  }
}

const PairwiseWeights& WeightedSample::pairwise() const {
  if (!pairwise_) throw ConfigError("sample carries no pairwise weights");
  return *pairwise_;
}

bool WeightedSample::has_design() const noexcept {
  for (const WeightedRecord& r : records_) {
    if (!r.stratum || !r.psu) return false;
  }
  return true;
}

}  // namespace sgcauc
