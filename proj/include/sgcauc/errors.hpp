#pragma once

#include <stdexcept>
#include <string>

namespace sgcauc {

/// Argument outside the mathematical domain of a function (NaN, u in {0,1}, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A statistic that cannot be mapped through a bridging function because it
/// lies outside the attainable interval by more than the clamp tolerance.
class RangeError : public std::range_error {
 public:
  RangeError(const std::string& what, double value, double lower, double upper)
      : std::range_error(what), value_(value), lower_(lower), upper_(upper) {}

  double value() const noexcept { return value_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double value_;
  double lower_;
  double upper_;
};

/// Sample cannot support the requested estimator (single class, too few records).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid simulation spec, sampling plan, estimator configuration or config file.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input data (CSV schema violations); carries the 1-based line number when known.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace sgcauc
