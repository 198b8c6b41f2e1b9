#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "sgcauc/errors.hpp"
#include "sgcauc/io.hpp"

using namespace sgcauc;

namespace {

WeightedSample parse(const std::string& text, WeightKind kind = WeightKind::Auto) {
  std::istringstream in(text);
  return read_sample_csv(in, kind);
}

long error_line(const std::string& text, WeightKind kind = WeightKind::Auto) {
  try {
    parse(text, kind);
  } catch (const DataError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(ReadSampleCsv, Basic) {
  const auto s = parse("x,y,note\n0.5,1,a\n-1.25,0,b\n\n2,1,c\n");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].y, 1);
  EXPECT_DOUBLE_EQ(s[1].x, -1.25);
  EXPECT_DOUBLE_EQ(s[2].weight, 1.0);
  EXPECT_FALSE(s[0].stratum.has_value());
}

TEST(ReadSampleCsv, WeightColumns) {
  const auto w = parse("y,x,weight\n1,0.1,2.5\n0,0.2,4\n");
  EXPECT_DOUBLE_EQ(w[0].weight, 2.5);
  const auto p = parse("y,x,incl_prob\n1,0.1,0.25\n0,0.2,0.5\n");
  EXPECT_DOUBLE_EQ(p[0].weight, 4.0);
  EXPECT_DOUBLE_EQ(p[1].weight, 2.0);
  const auto none = parse("y,x,weight\n1,0.1,2.5\n0,0.2,4\n", WeightKind::None);
  EXPECT_DOUBLE_EQ(none[0].weight, 1.0);
  EXPECT_EQ(error_line("y,x,weight,incl_prob\n1,0,1,1\n0,1,1,1\n"), 1);
  EXPECT_EQ(error_line("y,x\n1,0\n0,1\n", WeightKind::Weight), 1);
  EXPECT_EQ(error_line("y,x,weight\n1,0,1\n0,1,1\n", WeightKind::InclProb), 1);
}

TEST(ReadSampleCsv, DesignColumns) {
  const auto s = parse("y,x,weight,stratum,psu\n1,0.1,2,3,17\n0,0.2,2,3,18\n");
  ASSERT_TRUE(s.has_design());
  EXPECT_EQ(*s[1].stratum, 3);
  EXPECT_EQ(*s[1].psu, 18);
}

TEST(ReadSampleCsv, SchemaErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line(""), 1);
  EXPECT_EQ(error_line("y,weight\n1,2\n"), 1);
  EXPECT_EQ(error_line("y,x,y\n1,2,1\n"), 1);
  EXPECT_EQ(error_line("y,x\n1,0\n2,0\n"), 3);
  EXPECT_EQ(error_line("y,x\n1,0\n0,abc\n"), 3);
  EXPECT_EQ(error_line("y,x\n1,0\n0,1,5\n"), 3);
  EXPECT_EQ(error_line("y,x\n1,0\n0,inf\n"), 3);
  EXPECT_EQ(error_line("y,x,weight\n1,0,1\n0,1,-2\n"), 3);
  EXPECT_EQ(error_line("y,x,incl_prob\n1,0,1.5\n0,1,0.5\n"), 2);
  EXPECT_EQ(error_line("y,x,stratum\n1,0,1.5\n0,1,2\n"), 2);
  EXPECT_EQ(error_line("y,x\n"), 1);
  try {
    parse("y,x\n1,0\n1,q\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ReadSampleCsv, SingleClassIsEstimationError) {
  EXPECT_THROW(parse("y,x\n1,0\n1,1\n"), EstimationError);
}

TEST(WriteSampleCsv, RoundTrip) {
  const auto d = oracle::sgc_draws(200, 0.4, 0.5, 17);
  std::vector<WeightedRecord> recs;
  for (std::size_t i = 0; i < d.y.size(); ++i) {
    recs.push_back({d.y[i], d.x[i], 1.0 / (0.003 + 0.001 * (i % 7)), static_cast<std::int64_t>(i % 4),
                    static_cast<std::int64_t>(i % 9)});
  }
  const WeightedSample s(recs);
  std::ostringstream out;
  write_sample_csv(out, s);
  const auto back = parse(out.str());
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(back[i].y, s[i].y);
    EXPECT_NEAR(back[i].x, s[i].x, 1e-12 * std::abs(s[i].x));
    EXPECT_EQ(back[i].x, s[i].x);
    EXPECT_EQ(back[i].weight, s[i].weight);
    EXPECT_EQ(back[i].stratum, s[i].stratum);
    EXPECT_EQ(back[i].psu, s[i].psu);
  }
}

TEST(WeightKindNames, Parse) {
  EXPECT_EQ(weight_kind_from_string("incl_prob"), WeightKind::InclProb);
  EXPECT_EQ(weight_kind_from_string("auto"), WeightKind::Auto);
  EXPECT_FALSE(weight_kind_from_string("pi").has_value());
}

TEST(ScenarioConfigJson, ParseAndDefaults) {
  const auto c = parse_scenario_config(R"({
    "scenarios": [{"informativeness": 2, "outlyingness": 1}],
    "r_grid": {"lo": 0.1, "hi": 0.9, "n": 5},
    "replications": 7,
    "master_seed": 42,
    "population": {"size": 24000},
    "plan": {"sample_size": 300},
    "outlier_rates": [0, 0.1, 0.2]
  })");
  ASSERT_EQ(c.scenarios.size(), 1u);
  EXPECT_EQ(c.scenarios[0], (Scenario{2, 1}));
  ASSERT_EQ(c.r_grid.size(), 5u);
  EXPECT_DOUBLE_EQ(c.r_grid[2], 0.5);
  EXPECT_EQ(c.replications, 7);
  EXPECT_EQ(c.master_seed, 42u);
  EXPECT_EQ(c.population.size, 24000u);
  EXPECT_EQ(c.population.strata, 10);
  EXPECT_EQ(c.plan.sample_size, 300u);
  EXPECT_DOUBLE_EQ(c.outlier_rates[2], 0.2);

  const auto d = parse_scenario_config("{}");
  EXPECT_EQ(d.scenarios.size(), 9u);
  EXPECT_EQ(d.r_grid.size(), 50u);
  EXPECT_EQ(d.replications, 100);
  const auto arr = parse_scenario_config(R"({"r_grid": [0.25, 0.75]})");
  EXPECT_EQ(arr.r_grid, (std::vector<double>{0.25, 0.75}));
}

TEST(ScenarioConfigJson, Errors) {
  EXPECT_THROW(parse_scenario_config("{"), ConfigError);
  EXPECT_THROW(parse_scenario_config(R"({"replicates": 3})"), ConfigError);
  EXPECT_THROW(parse_scenario_config(R"({"population": {"N": 3}})"), ConfigError);
  EXPECT_THROW(parse_scenario_config(R"({"replications": "many"})"), ConfigError);
  EXPECT_THROW(parse_scenario_config(R"({"outlier_rates": [0, 0.1]})"), ConfigError);
  EXPECT_THROW(parse_scenario_config(R"({"r_grid": [0.5, 1.5]})"), ConfigError);
  EXPECT_THROW(read_scenario_config("/nonexistent/config.json"), ConfigError);
}

TEST(ScenarioConfigJson, DumpRoundTrip) {
  ScenarioConfig c;
  c.scenarios = {{1, 0}, {0, 2}};
  c.r_grid = {0.123456789, 0.5};
  c.replications = 3;
  c.master_seed = 18446744073709551615ULL;
  const auto back = parse_scenario_config(scenario_config_to_json(c));
  EXPECT_EQ(back.scenarios, c.scenarios);
  EXPECT_EQ(back.r_grid, c.r_grid);
  EXPECT_EQ(back.master_seed, c.master_seed);
  EXPECT_EQ(scenario_config_to_json(back), scenario_config_to_json(c));
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(EstimateReports, JsonAndCsv) {
  const auto d = oracle::sgc_draws(300, 0.5, 0.6, 23);
  const WeightedSample s = oracle::to_sample(d.y, d.x);
  const EstimateBundle b = estimate_all(s);
  std::ostringstream js;
  write_estimate_json(js, b, std::nullopt);
  const auto j = nlohmann::json::parse(js.str());
  EXPECT_NEAR(j["prevalence"].get<double>(), b.p_hat, 1e-12);
  EXPECT_NEAR(j["auc"]["Kuw"].get<double>(), *b.auc_of(Estimator::KendallUw), 1e-11);
  EXPECT_FALSE(j["r2"].contains("W"));
  EXPECT_FALSE(j.contains("bootstrap"));

  Rng rng = make_stream(1, {});
  const auto reps = make_replicates(s, 30, rng);
  const auto boot = bootstrap_bundle(s, b, reps);
  std::ostringstream js2;
  write_estimate_json(js2, b, boot);
  const auto j2 = nlohmann::json::parse(js2.str());
  EXPECT_EQ(j2["bootstrap"]["B"].get<int>(), 30);
  EXPECT_TRUE(j2["bootstrap"]["se"]["auc"].contains("S"));

  std::ostringstream csv;
  write_estimate_csv(csv, b, boot);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "quantity,estimator,value,se,ci_low,ci_high");
  EXPECT_NE(text.find("\nauc,Kuw,"), std::string::npos);
}
