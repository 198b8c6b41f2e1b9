#include "sgcauc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sgcauc/bridging.hpp"
#include "sgcauc/errors.hpp"
#include "sgcauc/format.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sgcauc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kEstimators = kAllEstimators.size();

GridResult empty_result(const ScenarioConfig& config) {
  GridResult g;
  g.scenarios = config.scenarios;
  g.r_grid = config.r_grid;
  for (const double r : config.r_grid) g.true_auc.push_back(true_auc(r, config.population.prevalence));
  g.cells.resize(g.scenarios.size() * g.r_grid.size() * kEstimators);
  return g;
}

// Folds per-replication deviations into bias/MSE in replication order.
GridResult reduce(const ScenarioConfig& config, const std::vector<std::array<double, 6>>& outcomes) {
  GridResult g = empty_result(config);
  const auto reps = static_cast<std::size_t>(config.replications);
  for (std::size_t s = 0; s < g.scenarios.size(); ++s) {
    for (std::size_t k = 0; k < g.r_grid.size(); ++k) {
      for (const Estimator e : kAllEstimators) {
        CellStats& cell = g.at(s, k, e);
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t j = 0; j < reps; ++j) {
          const double d = outcomes[(s * g.r_grid.size() + k) * reps + j][static_cast<std::size_t>(e)];
          if (std::isnan(d)) {
            ++cell.failures;
            continue;
          }
          sum += d;
          sum_sq += d * d;
          ++cell.reps;
        }
        cell.bias = cell.reps > 0 ? sum / cell.reps : kNaN;
        cell.mse = cell.reps > 0 ? sum_sq / cell.reps : kNaN;
      }
    }
  }
  return g;
}

int level_from(const std::string& text) {
  std::size_t used = 0;
  const int v = std::stoi(text, &used);
  if (used != text.size()) throw DataError("bad integer field '" + text + "'");
  return v;
}

}  // namespace

std::vector<Scenario> all_scenarios() {
  std::vector<Scenario> out;
  for (int i = 0; i < 3; ++i) {
    for (int o = 0; o < 3; ++o) out.push_back({i, o});
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

void ScenarioConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (scenarios.empty()) throw ConfigError("no scenarios configured");
  for (const Scenario& s : scenarios) {
    if (s.informativeness < 0 || s.informativeness > 2 || s.outlyingness < 0 || s.outlyingness > 2) {
      throw ConfigError("scenario levels must be 0, 1 or 2");
    }
  }
  for (const double r : r_grid) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("r grid values must lie in (0, 1)");
  }
  for (const double rate : outlier_rates) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("outlier rates must lie in [0, 1]");
  }
  PopulationSpec probe = population;
  probe.target_auc = 0.75;
  probe.auc_halfwidth = 0.0;
  probe.validate();
  if (plan.psus_sampled > population.psus_per_stratum) {
    throw ConfigError("cannot sample more PSUs than a stratum holds");
  }
  for (const Scenario& s : scenarios) {
    const auto informativeness = static_cast<Informativeness>(s.informativeness);
    const auto ranking = linear_grid(0.0, 1.0, static_cast<std::size_t>(population.strata));
    const auto n_h = allocate_strata(informativeness, plan.sample_size, ranking, plan.psus_sampled);
    for (const std::size_t nh : n_h) {
      if (nh / static_cast<std::size_t>(plan.psus_sampled) > population.psu_size()) {
        throw ConfigError("stratum allocation exceeds PSU size");
      }
    }
  }
}

const CellStats& GridResult::at(std::size_t scenario, std::size_t r, Estimator e) const {
  return cells[(scenario * r_grid.size() + r) * kEstimators + static_cast<std::size_t>(e)];
}

CellStats& GridResult::at(std::size_t scenario, std::size_t r, Estimator e) {
  return cells[(scenario * r_grid.size() + r) * kEstimators + static_cast<std::size_t>(e)];
}

bool operator==(const GridResult& a, const GridResult& b) {
  if (a.scenarios != b.scenarios || a.r_grid != b.r_grid || a.cells.size() != b.cells.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    const CellStats& x = a.cells[i];
    const CellStats& y = b.cells[i];
    const bool same_bias = x.bias == y.bias || (std::isnan(x.bias) && std::isnan(y.bias));
    const bool same_mse = x.mse == y.mse || (std::isnan(x.mse) && std::isnan(y.mse));
    if (!same_bias || !same_mse || x.reps != y.reps || x.failures != y.failures) return false;
  }
  return true;
}

double true_auc(double r, double p) {
  const BridgeContext ctx(p);
  return auc_from_rank(RankStatKind::Kendall, bridge_kendall(r, ctx), ctx);
}

double effective_halfwidth(double a, double configured) {
  constexpr double kInside = 0.999;
  return std::min({configured, kInside * (a - 0.5), kInside * (1.0 - a)});
}

std::array<double, 6> run_replication(const ScenarioConfig& config, std::size_t scenario,
                                      std::size_t r_index, int replication) {
  std::array<double, 6> out;
  out.fill(kNaN);
  const Scenario& sc = config.scenarios[scenario];
  const double auc = true_auc(config.r_grid[r_index], config.population.prevalence);

  PopulationSpec pop_spec = config.population;
  pop_spec.target_auc = auc;
  pop_spec.auc_halfwidth = effective_halfwidth(auc, config.population.auc_halfwidth);
  SamplingPlan plan = config.plan;
  plan.informativeness = static_cast<Informativeness>(sc.informativeness);
  const ContaminationSpec contamination{config.outlier_rates[static_cast<std::size_t>(sc.outlyingness)]};

  // Streams are keyed by the scenario levels, not the list position, so a
  // cell reproduces whatever subset of scenarios is configured.
  const auto scenario_key = static_cast<std::uint64_t>(sc.informativeness * 3 + sc.outlyingness);
  Rng rng = make_stream(config.master_seed,
                        {scenario_key, static_cast<std::uint64_t>(r_index),
                         static_cast<std::uint64_t>(replication)});
  try {
    const FinitePopulation pop = build_population(pop_spec, rng);
    const SampleDraw draw = draw_sample(pop, plan, rng);
    const SimulatedSample sim = contaminate_and_dichotomize(draw, pop, contamination, rng);
    EstimateOptions options;
    options.compute_r2 = false;
    options.path = KernelPath::Serial;
    options.tolerate_range_errors = true;
    const EstimateBundle bundle = estimate_all(sim.sample, options);
    for (const Estimator e : kAllEstimators) {
      if (const auto a = bundle.auc_of(e)) out[static_cast<std::size_t>(e)] = *a - auc;
    }
  } catch (const EstimationError&) {
    // single-class draw: the whole replication counts as failed
  }
  return out;
}

GridResult run_grid(const ScenarioConfig& config, int jobs) {
  config.validate();
  const std::size_t reps = static_cast<std::size_t>(config.replications);
  const std::size_t per_scenario = config.r_grid.size() * reps;
  const std::size_t total = config.scenarios.size() * per_scenario;
  std::vector<std::array<double, 6>> outcomes(total);
  const auto ntasks = static_cast<std::ptrdiff_t>(total);
#ifdef _OPENMP
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (std::ptrdiff_t t = 0; t < ntasks; ++t) {
    const auto task = static_cast<std::size_t>(t);
    outcomes[task] = run_replication(config, task / per_scenario, (task % per_scenario) / reps,
                                     static_cast<int>(task % reps));
  }
  return reduce(config, outcomes);
}

GridResult run_grid_serial(const ScenarioConfig& config) {
  config.validate();
  const std::size_t reps = static_cast<std::size_t>(config.replications);
  std::vector<std::array<double, 6>> outcomes;
  outcomes.reserve(config.scenarios.size() * config.r_grid.size() * reps);
  for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
    for (std::size_t k = 0; k < config.r_grid.size(); ++k) {
      for (std::size_t j = 0; j < reps; ++j) {
        outcomes.push_back(run_replication(config, s, k, static_cast<int>(j)));
      }
    }
  }
  return reduce(config, outcomes);
}

void write_summary(std::ostream& out, const GridResult& result, Metric metric) {
  out << "informativeness,outlyingness,r,estimator," << (metric == Metric::Bias ? "bias" : "mse")
      << ",n_reps,failures\n";
  for (std::size_t s = 0; s < result.scenarios.size(); ++s) {
    for (std::size_t k = 0; k < result.r_grid.size(); ++k) {
      for (const Estimator e : kAllEstimators) {
        const CellStats& c = result.at(s, k, e);
        out << result.scenarios[s].informativeness << ',' << result.scenarios[s].outlyingness << ','
            << format_number(result.r_grid[k]) << ',' << to_string(e) << ','
            << format_number(metric == Metric::Bias ? c.bias : c.mse) << ',' << c.reps << ','
            << c.failures << '\n';
      }
    }
  }
}

std::vector<SummaryRow> read_summary(std::istream& in) {
  std::vector<SummaryRow> rows;
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) return rows;
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string field; std::getline(ss, field, ',');) f.push_back(field);
    if (f.size() != 7) throw DataError("expected 7 fields", line_no);
    try {
      rows.push_back({level_from(f[0]), level_from(f[1]), std::stod(f[2]), f[3],
                      f[4] == "nan" ? kNaN : std::stod(f[4]), level_from(f[5]), level_from(f[6])});
    } catch (const std::logic_error&) {
      throw DataError("malformed summary row", line_no);
    }
  }
  return rows;
}

}  // namespace sgcauc
