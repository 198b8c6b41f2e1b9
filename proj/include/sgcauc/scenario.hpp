#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgcauc/rank_estimators.hpp"
#include "sgcauc/survey_sim.hpp"

namespace sgcauc {

/// One cell of the informativeness x outlyingness grid (levels 0, 1, 2).
struct Scenario {
  int informativeness = 0;
  int outlyingness = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

std::vector<Scenario> all_scenarios();

/// n equally spaced points on [lo, hi], endpoints included.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

struct ScenarioConfig {
  std::vector<Scenario> scenarios = all_scenarios();
  std::vector<double> r_grid = linear_grid(0.005, 0.995, 50);
  int replications = 100;
  PopulationSpec population;  // target_auc is set per grid point
  SamplingPlan plan;          // informativeness is set per scenario
  std::array<double, 3> outlier_rates = {0.0, 0.05, 0.15};
  std::uint64_t master_seed = 20210601;

  void validate() const;
};

struct CellStats {
  double bias = 0.0;
  double mse = 0.0;
  int reps = 0;
  int failures = 0;
};

struct GridResult {
  std::vector<Scenario> scenarios;
  std::vector<double> r_grid;
  std::vector<double> true_auc;  // per grid point
  std::vector<CellStats> cells;  // [scenario][r][estimator]

  const CellStats& at(std::size_t scenario, std::size_t r, Estimator e) const;
  CellStats& at(std::size_t scenario, std::size_t r, Estimator e);

  friend bool operator==(const GridResult&, const GridResult&);
};

/// Population AUC for latent correlation r at prevalence p (Kendall bridge).
double true_auc(double r, double p);

/// Stratum AUC half-width actually used at target AUC a: the configured width,
/// narrowed near 0.5 and 1 so every stratum AUC stays inside (0.5, 1).
double effective_halfwidth(double a, double configured);

/// Estimator deviations (A_hat - A) for one replication; NaN marks a failure.
std::array<double, 6> run_replication(const ScenarioConfig& config, std::size_t scenario,
                                      std::size_t r_index, int replication);

/// Runs every (scenario, r, replication) cell. `jobs` bounds OpenMP threads
/// (0 = runtime default). Results are reduced in (scenario, r, replication)
/// order, so they do not depend on `jobs`.
GridResult run_grid(const ScenarioConfig& config, int jobs = 0);

/// Same computation as run_grid without OpenMP.
GridResult run_grid_serial(const ScenarioConfig& config);

enum class Metric { Bias, Mse };

/// Long table: informativeness,outlyingness,r,estimator,<metric>,n_reps,failures.
void write_summary(std::ostream& out, const GridResult& result, Metric metric);

struct SummaryRow {
  int informativeness = 0;
  int outlyingness = 0;
  double r = 0.0;
  std::string estimator;
  double value = 0.0;
  int n_reps = 0;
  int failures = 0;
};

std::vector<SummaryRow> read_summary(std::istream& in);

}  // namespace sgcauc
