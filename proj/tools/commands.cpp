#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sgcauc/bootstrap.hpp"
#include "sgcauc/bridging.hpp"
#include "sgcauc/errors.hpp"
#include "sgcauc/format.hpp"
#include "sgcauc/io.hpp"
#include "sgcauc/scenario.hpp"

namespace sgcauc::cli {

namespace {

struct EstimateArgs {
  std::string input;
  int bootstrap = 0;
  std::optional<std::uint64_t> seed;
  std::string weight_kind = "auto";
  std::string output = "json";
  int jobs = 0;
};

struct BridgeArgs {
  double p = 0.0;
  std::string stat = "kendall";
  std::optional<double> value;
  std::optional<double> r;
  std::optional<double> auc;
  std::optional<int> table;
};

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::string output = ".";
};

struct FigureArgs {
  int figure = 2;
  std::vector<double> p_list = {0.01, 0.1, 0.3, 0.5};
  int points = 201;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedEnv); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::logic_error&) {
    }
    throw ConfigError(std::string(kSeedEnv) + " is not an unsigned integer");
  }
  return fallback;
}

RankStatKind parse_kind(const std::string& name) {
  if (name == "kendall") return RankStatKind::Kendall;
  if (name == "spearman") return RankStatKind::Spearman;
  if (name == "quadrant") return RankStatKind::Quadrant;
  if (name == "wilcoxon") return RankStatKind::Wilcoxon;
  throw ConfigError("unknown --stat '" + name + "' (kendall, spearman, quadrant, wilcoxon)");
}

BridgeContext cli_context(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("--p must lie in (0, 1)");
  return BridgeContext(p, p > 0.5 ? MedianBranch::One : MedianBranch::Zero);
}

void bridge_header(std::ostream& out) { out << "r,r_K,r_S,r_Q,W,A,R2\n"; }

void bridge_row(std::ostream& out, double r, const BridgeContext& ctx) {
  const double rk = bridge_kendall(r, ctx);
  const double a = auc_from_rank(RankStatKind::Kendall, rk, ctx);
  const double w = r < 0.0 ? 0.5 - a : a - 0.5;
  out << format_number(r) << ',' << format_number(rk) << ',' << format_number(bridge_spearman(r, ctx))
      << ',' << format_number(bridge_quadrant(r, ctx)) << ',' << format_number(w) << ','
      << format_number(a) << ',' << format_number(r * r) << '\n';
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const auto kind = weight_kind_from_string(a.weight_kind);
  if (!kind) throw ConfigError("unknown --weight-kind '" + a.weight_kind + "'");
  if (a.output != "json" && a.output != "csv") throw ConfigError("--output must be json or csv");
  if (a.bootstrap < 0) throw ConfigError("--bootstrap must be nonnegative");

  const WeightedSample sample = read_sample_file(a.input, *kind);
  const EstimateBundle bundle = estimate_all(sample);
  std::optional<BundleBootstrap> boot;
  if (a.bootstrap > 0) {
    Rng rng = make_stream(resolve_seed(a.seed, 1), {});
    const ReplicateWeights reps = make_replicates(sample, a.bootstrap, rng);
    boot = bootstrap_bundle(sample, bundle, reps, a.jobs);
  }
  if (a.output == "json") {
    write_estimate_json(out, bundle, boot);
  } else {
    write_estimate_csv(out, bundle, boot);
  }
  return kExitOk;
}

int cmd_bridge(const BridgeArgs& a, std::ostream& final_out) {
  std::ostringstream out;
  const int given = (a.value ? 1 : 0) + (a.r ? 1 : 0) + (a.auc ? 1 : 0) + (a.table ? 1 : 0);
  if (given != 1) throw ConfigError("give exactly one of --value, --r, --auc, --table");
  const BridgeContext ctx = cli_context(a.p);
  bridge_header(out);
  if (a.table) {
    if (*a.table < 2) throw ConfigError("--table needs at least 2 points");
    for (const double r : linear_grid(-1.0, 1.0, static_cast<std::size_t>(*a.table))) bridge_row(out, r, ctx);
  } else if (a.r) {
    if (!(*a.r >= -1.0 && *a.r <= 1.0)) throw RangeError("--r outside [-1, 1]", *a.r, -1.0, 1.0);
    bridge_row(out, *a.r, ctx);
  } else if (a.auc) {
    if (!(*a.auc >= 0.5 && *a.auc <= 1.0)) throw RangeError("--auc outside [0.5, 1]", *a.auc, 0.5, 1.0);
    bridge_row(out, latent_correlation_from_auc(*a.auc, ctx), ctx);
  } else {
    const RankStatKind kind = parse_kind(a.stat);
    double r = 0.0;
    if (kind == RankStatKind::Wilcoxon) {
      const double auc = auc_from_rank(kind, *a.value, ctx);
      r = std::copysign(latent_correlation_from_auc(auc, ctx), *a.value);
    } else {
      r = invert_bridge(kind, *a.value, ctx);
    }
    bridge_row(out, r, ctx);
  }
  final_out << out.str();
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  ScenarioConfig config = a.config.empty() ? ScenarioConfig{} : read_scenario_config(a.config);
  config.master_seed = resolve_seed(a.seed, config.master_seed);
  config.validate();
  const GridResult result = run_grid(config, a.jobs);

  const std::filesystem::path dir(a.output);
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, auto&& body) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + (dir / name).string() + "'");
    body(f);
  };
  write("bias.csv", [&](std::ostream& f) { write_summary(f, result, Metric::Bias); });
  write("mse.csv", [&](std::ostream& f) { write_summary(f, result, Metric::Mse); });
  const std::string canonical = scenario_config_to_json(config);
  write("manifest.json", [&](std::ostream& f) {
    f << "{\n  \"master_seed\": " << config.master_seed << ",\n  \"config_hash\": \"fnv1a64:"
      << hex64(fnv1a(canonical)) << "\",\n  \"outputs\": [\"bias.csv\", \"mse.csv\"],\n  \"config\": "
      << canonical << "\n}\n";
  });
  out << "wrote " << (dir / "bias.csv").string() << ", " << (dir / "mse.csv").string() << ", "
      << (dir / "manifest.json").string() << '\n';
  return kExitOk;
}

int cmd_figure_data(const FigureArgs& a, std::ostream& out) {
  if (a.figure != 2) throw ConfigError("only --figure 2 is available");
  if (a.points < 2) throw ConfigError("--points needs at least 2");
  const auto grid = linear_grid(0.0, 1.0, static_cast<std::size_t>(a.points));
  out << "p,r,A,R2,A_reference\n";
  for (const double p : a.p_list) {
    const BridgeContext ctx = cli_context(p);
    for (const CurvePoint& pt : auc_latent_curve(ctx, grid)) {
      out << format_number(p) << ',' << format_number(pt.r) << ',' << format_number(pt.auc) << ','
          << format_number(pt.r2) << ',' << format_number(0.5 * (1.0 + pt.r)) << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semiparametric Gaussian copula AUC and latent R^2 estimation"};
  app.name(args.empty() ? "sgcauc" : args[0]);
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate AUC and latent R^2 from a CSV sample");
  estimate->add_option("input", est.input, "CSV with columns y, x [, weight | incl_prob, stratum, psu]")->required();
  estimate->add_option("--bootstrap", est.bootstrap, "Bootstrap replicate count (0 = none)");
  estimate->add_option("--seed", est.seed, std::string("Bootstrap seed (default: $") + kSeedEnv + ", else 1)");
  estimate->add_option("--weight-kind", est.weight_kind, "auto, weight, incl_prob or none");
  estimate->add_option("--output", est.output, "json or csv");
  estimate->add_option("--jobs", est.jobs, "Bootstrap threads (0 = OpenMP default)");

  BridgeArgs br;
  auto* bridge_cmd = app.add_subcommand("bridge", "Evaluate or invert bridging functions");
  bridge_cmd->add_option("--p", br.p, "Prevalence in (0, 1)")->required();
  bridge_cmd->add_option("--stat", br.stat, "Statistic for --value: kendall, spearman, quadrant, wilcoxon");
  bridge_cmd->add_option("--value", br.value, "Population rank statistic to invert");
  bridge_cmd->add_option("--r", br.r, "Latent correlation to map forward");
  bridge_cmd->add_option("--auc", br.auc, "AUC to map to a latent correlation");
  bridge_cmd->add_option("--table", br.table, "Tabulate N equally spaced r in [-1, 1]");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run the scenario grid and write bias/MSE tables");
  simulate->add_option("config", sim.config, "JSON scenario config (defaults when omitted)");
  simulate->add_option("--seed", sim.seed, std::string("Master seed (default: $") + kSeedEnv + ", else config)");
  simulate->add_option("--jobs", sim.jobs, "Worker threads (0 = OpenMP default)");
  simulate->add_option("--output", sim.output, "Output directory");

  FigureArgs fig;
  auto* figure = app.add_subcommand("figure-data", "AUC versus latent correlation curves");
  figure->add_option("--figure", fig.figure, "Figure id (2)");
  figure->add_option("--p-list", fig.p_list, "Prevalences, comma separated")->delimiter(',');
  figure->add_option("--points", fig.points, "Grid points on r in [0, 1]");

  try {
    std::vector<std::string> rest(args.rbegin(), args.rend());
    if (!rest.empty()) rest.pop_back();
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(est, out);
    if (bridge_cmd->parsed()) return cmd_bridge(br, out);
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (figure->parsed()) return cmd_figure_data(fig, out);
  } catch (const RangeError& e) {
    err << "range error: " << e.what() << " (attainable interval [" << format_number(e.lower()) << ", "
        << format_number(e.upper()) << "], value " << format_number(e.value()) << ")\n";
    return kExitRange;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const EstimationError& e) {
    err << "estimation error: " << e.what() << '\n';
    return kExitData;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitData;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace sgcauc::cli
