#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "sgcauc/bootstrap.hpp"
#include "sgcauc/rank_estimators.hpp"
#include "sgcauc/scenario.hpp"
#include "sgcauc/survey_sim.hpp"

namespace sgcauc {

/// Which column supplies the design weight.
enum class WeightKind {
  Auto,      // whichever of weight / incl_prob is present, else equal weights
  Weight,    // the weight column is required
  InclProb,  // the incl_prob column is required; weight = 1 / incl_prob
  None,      // ignore both columns
};

std::optional<WeightKind> weight_kind_from_string(std::string_view name);

/// Reads the CSV data schema: header row, required y and x, optional weight,
/// incl_prob, stratum and psu; other columns are ignored. Throws DataError
/// (with the 1-based line number) on schema or value problems.
WeightedSample read_sample_csv(std::istream& in, WeightKind kind = WeightKind::Auto);
WeightedSample read_sample_file(const std::string& path, WeightKind kind = WeightKind::Auto);

/// Writes y,x,weight[,stratum,psu] at round-trip precision.
void write_sample_csv(std::ostream& out, const WeightedSample& sample);

/// JSON scenario config; absent keys keep their defaults. Throws ConfigError.
ScenarioConfig parse_scenario_config(std::string_view text);
ScenarioConfig read_scenario_config(const std::string& path);
std::string scenario_config_to_json(const ScenarioConfig& config);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

void write_estimate_json(std::ostream& out, const EstimateBundle& bundle,
                         const std::optional<BundleBootstrap>& boot);

/// Long CSV: quantity,estimator,value[,se,ci_low,ci_high].
void write_estimate_csv(std::ostream& out, const EstimateBundle& bundle,
                        const std::optional<BundleBootstrap>& boot);

}  // namespace sgcauc
