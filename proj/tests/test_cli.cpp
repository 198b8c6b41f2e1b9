#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "json.hpp"
#include "sgcauc/io.hpp"
#include "sgcauc/scenario.hpp"

using namespace sgcauc;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sgcauc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string field; std::getline(ss, field, ',');) f.push_back(field);
    rows.push_back(f);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("sgcauc_cli_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return path_ / name;
  }

 private:
  fs::path path_;
};

}  // namespace

TEST(CliBridge, ZeroCorrelationRow) {
  const Result r = run_cli({"bridge", "--p", "0.5", "--r", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"r", "r_K", "r_S", "r_Q", "W", "A", "R2"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "0", "1.5", "0", "0", "0.5", "0"}));
}

TEST(CliBridge, AucToCorrelation) {
  const Result r = run_cli({"bridge", "--p", "0.5", "--auc", "0.8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  const double rr = std::stod(rows[1][0]);
  EXPECT_GE(rr, 0.58);
  EXPECT_LE(rr, 0.66);
  EXPECT_NEAR(std::stod(rows[1][5]), 0.8, 1e-9);
}

TEST(CliBridge, QuadrantOutOfRangeExitsThree) {
  const Result r = run_cli({"bridge", "--p", "0.2", "--stat", "quadrant", "--value", "0.25"});
  EXPECT_EQ(r.code, cli::kExitRange);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("attainable interval [-0.2, 0.2]"), std::string::npos) << r.err;
}

TEST(CliBridge, InversionsAgree) {
  const Result fwd = run_cli({"bridge", "--p", "0.3", "--r", "0.45"});
  ASSERT_EQ(fwd.code, 0);
  const auto row = csv_rows(fwd.out)[1];
  const char* stats[] = {"kendall", "spearman", "quadrant", "wilcoxon"};
  const std::string values[] = {row[1], row[2], row[3], row[4]};
  for (int k = 0; k < 4; ++k) {
    const Result inv = run_cli({"bridge", "--p", "0.3", "--stat", stats[k], "--value", values[k]});
    ASSERT_EQ(inv.code, 0) << stats[k] << inv.err;
    EXPECT_NEAR(std::stod(csv_rows(inv.out)[1][0]), 0.45, 1e-8) << stats[k];
  }
}

TEST(CliBridge, Table) {
  const Result r = run_cli({"bridge", "--p", "0.1", "--table", "21"});
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_EQ(rows[1][0], "-1");
  EXPECT_EQ(rows[11][0], "0");
  EXPECT_EQ(rows[21][0], "1");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(std::stod(rows[i][5]), 0.5);
    EXPECT_NEAR(std::stod(rows[i][6]), std::pow(std::stod(rows[i][0]), 2), 1e-12);
  }
}

TEST(CliBridge, UsageErrors) {
  EXPECT_EQ(run_cli({"bridge", "--p", "0.5"}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"bridge", "--p", "0.5", "--r", "0.1", "--auc", "0.6"}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"bridge", "--p", "1.5", "--r", "0.1"}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"bridge", "--p", "0.5", "--r", "1.5"}).code, cli::kExitRange);
  EXPECT_EQ(run_cli({"bridge", "--p", "0.5", "--stat", "gini", "--value", "0.1"}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"bridge", "--r", "0.1"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"nonsense"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST(CliEstimate, BothWeightColumnsExitTwo) {
  TempDir dir;
  const auto f = dir.write("both.csv", "y,x,weight,incl_prob\n1,0.5,2,0.5\n0,0.1,2,0.5\n");
  const Result r = run_cli({"estimate", f.string()});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("mutually exclusive"), std::string::npos);
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
}

TEST(CliEstimate, SingleClassExitTwo) {
  TempDir dir;
  const auto f = dir.write("one.csv", "y,x\n1,0.5\n1,0.1\n1,3\n");
  EXPECT_EQ(run_cli({"estimate", f.string()}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"estimate", (dir.path() / "missing.csv").string()}).code, cli::kExitData);
  const auto bad = dir.write("bad.csv", "y,x\n1,0.5\n0,zz\n");
  const Result r = run_cli({"estimate", bad.string()});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST(CliEstimate, NullFileAucsNearHalf) {
  TempDir dir;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> z;
  std::ostringstream text;
  text << "y,x\n";
  for (int i = 0; i < 10000; ++i) text << (z(rng) > 0.8416 ? 1 : 0) << ',' << z(rng) << '\n';
  const auto f = dir.write("null.csv", text.str());
  const Result r = run_cli({"estimate", f.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& [name, v] : j["auc"].items()) {
    if (v.is_null()) continue;
    EXPECT_GE(v.get<double>(), 0.5) << name;
    EXPECT_LE(v.get<double>(), 0.55) << name;
  }
}

TEST(CliEstimate, SurveyExportRoundTrip) {
  TempDir dir;
  PopulationSpec spec;
  spec.prevalence = 0.2;
  const double truth = true_auc(0.6, 0.2);
  spec.target_auc = truth;
  Rng rng = make_stream(31, {});
  const auto pop = build_population(spec, rng);
  const auto draw = draw_sample(pop, {2, 2000, Informativeness::Moderate}, rng);
  const auto sim = contaminate_and_dichotomize(draw, pop, {0.0}, rng);
  std::ostringstream csv;
  write_sample_csv(csv, sim.sample);
  const auto f = dir.write("survey.csv", csv.str());

  const Result r = run_cli({"estimate", f.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["auc"]["S"].get<double>(), truth, 0.03);

  // Export, import and re-estimate reproduce the statistics.
  const WeightedSample back = read_sample_file(f.string());
  EstimateOptions opt;
  opt.use_pairwise = false;
  opt.tolerate_range_errors = true;
  const auto a = estimate_all(sim.sample, opt);
  const auto b = estimate_all(back, opt);
  EXPECT_NEAR(a.stats.kendall_uw, b.stats.kendall_uw, 1e-12);
  EXPECT_NEAR(a.stats.kendall_pw, b.stats.kendall_pw, 1e-12);
  EXPECT_NEAR(a.stats.spearman, b.stats.spearman, 1e-12);
  EXPECT_NEAR(a.stats.quadrant, b.stats.quadrant, 1e-12);
  EXPECT_NEAR(a.stats.wilcoxon, b.stats.wilcoxon, 1e-12);
}

TEST(CliEstimate, BootstrapReportAndSeeds) {
  TempDir dir;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  std::ostringstream text;
  text << "y,x,weight,stratum,psu\n";
  for (int i = 0; i < 400; ++i) {
    const double u = z(rng);
    text << (u > 0.5 ? 1 : 0) << ',' << 0.6 * u + 0.8 * z(rng) << ',' << 1 + i % 4 << ',' << i % 5 << ','
         << i % 3 << '\n';
  }
  const auto f = dir.write("boot.csv", text.str());
  const Result a = run_cli({"estimate", f.string(), "--bootstrap", "40", "--seed", "9"});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto j = nlohmann::json::parse(a.out);
  ASSERT_TRUE(j.contains("bootstrap"));
  EXPECT_EQ(j["bootstrap"]["B"].get<int>(), 40);
  const auto ci = j["bootstrap"]["ci"]["auc"]["Kuw"];
  EXPECT_LE(ci[0].get<double>(), ci[1].get<double>());
  EXPECT_GT(j["bootstrap"]["se"]["auc"]["S"].get<double>(), 0.0);

  EXPECT_EQ(run_cli({"estimate", f.string(), "--bootstrap", "40", "--seed", "9"}).out, a.out);
  EXPECT_NE(run_cli({"estimate", f.string(), "--bootstrap", "40", "--seed", "10"}).out, a.out);
  ::setenv(cli::kSeedEnv, "9", 1);
  EXPECT_EQ(run_cli({"estimate", f.string(), "--bootstrap", "40"}).out, a.out);
  ::setenv(cli::kSeedEnv, "nine", 1);
  EXPECT_EQ(run_cli({"estimate", f.string(), "--bootstrap", "40"}).code, cli::kExitData);
  ::unsetenv(cli::kSeedEnv);

  const Result c = run_cli({"estimate", f.string(), "--bootstrap", "20", "--output", "csv"});
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(c.out.substr(0, c.out.find('\n')), "quantity,estimator,value,se,ci_low,ci_high");
  EXPECT_EQ(run_cli({"estimate", f.string(), "--output", "xml"}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"estimate", f.string(), "--weight-kind", "pi"}).code, cli::kExitData);
}

TEST(CliFigureData, Curves) {
  const Result r = run_cli({"figure-data", "--figure", "2", "--p-list", "0.01,0.5", "--points", "101"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 1u + 2u * 101u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"p", "r", "A", "R2", "A_reference"}));
  double max_gap = 0.0;
  double r_at_08[2] = {0, 0};
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double p = std::stod(rows[i][0]), rr = std::stod(rows[i][1]), a = std::stod(rows[i][2]);
    const int k = p < 0.1 ? 0 : 1;
    if (rr == 0.0) EXPECT_DOUBLE_EQ(a, 0.5);
    if (k == 1) max_gap = std::max(max_gap, std::abs(a - std::stod(rows[i][4])));
    if (a <= 0.8) r_at_08[k] = rr;
  }
  EXPECT_LT(max_gap, 0.05);
  EXPECT_LT(r_at_08[0], r_at_08[1]);
  EXPECT_EQ(run_cli({"figure-data", "--figure", "3"}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"figure-data", "--p-list", "0"}).code, cli::kExitData);
}

TEST(CliSimulate, DeterministicOutputs) {
  TempDir dir;
  const auto cfg = dir.write("cfg.json", R"({
    "scenarios": [{"informativeness": 0, "outlyingness": 0}, {"informativeness": 2, "outlyingness": 2}],
    "r_grid": [0.3, 0.6],
    "replications": 3,
    "population": {"psus_per_stratum": 4, "size": 2400},
    "plan": {"sample_size": 120}
  })");
  const auto out1 = dir.path() / "a", out2 = dir.path() / "b";
  ASSERT_EQ(run_cli({"simulate", cfg.string(), "--seed", "4", "--output", out1.string()}).code, 0);
  ASSERT_EQ(run_cli({"simulate", cfg.string(), "--seed", "4", "--jobs", "2", "--output", out2.string()}).code, 0);
  for (const char* name : {"bias.csv", "mse.csv", "manifest.json"}) {
    const std::string a = slurp(out1 / name);
    EXPECT_FALSE(a.empty()) << name;
    EXPECT_EQ(a, slurp(out2 / name)) << name;
  }
  const auto m = nlohmann::json::parse(slurp(out1 / "manifest.json"));
  EXPECT_EQ(m["master_seed"].get<std::uint64_t>(), 4u);
  EXPECT_EQ(m["config_hash"].get<std::string>().rfind("fnv1a64:", 0), 0u);
  EXPECT_EQ(csv_rows(slurp(out1 / "bias.csv")).size(), 1u + 2u * 2u * 6u);

  const auto bad = dir.write("bad.json", R"({"replicates": 3})");
  EXPECT_EQ(run_cli({"simulate", bad.string(), "--output", out1.string()}).code, cli::kExitData);
}
