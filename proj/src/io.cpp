#include "sgcauc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "sgcauc/errors.hpp"
#include "sgcauc/format.hpp"

namespace sgcauc {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& text, const char* column, long line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw DataError(std::string("column ") + column + ": cannot parse '" + text + "' as a number", line);
}

std::int64_t parse_id(const std::string& text, const char* column, long line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw DataError(std::string("column ") + column + ": cannot parse '" + text + "' as an integer id", line);
}

std::string round_trip(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Rounds to the 12 significant digits used for every printed number; the
// JSON writer then emits the shortest representation of that value.
json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

template <typename T>
void take(const json& obj, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

const char* stat_key(Estimator e) {
  switch (e) {
    case Estimator::KendallUw: return "kendall_uw";
    case Estimator::KendallTw: return "kendall_tw";
    case Estimator::KendallPw: return "kendall_pw";
    case Estimator::Wilcoxon: return "wilcoxon";
    case Estimator::Spearman: return "spearman";
    case Estimator::Quadrant: return "quadrant";
  }
  return "?";
}

std::optional<double> stat_value(const RankStatistics& s, Estimator e) {
  switch (e) {
    case Estimator::KendallUw: return s.kendall_uw;
    case Estimator::KendallTw: return s.kendall_tw;
    case Estimator::KendallPw: return s.kendall_pw;
    case Estimator::Wilcoxon: return s.wilcoxon;
    case Estimator::Spearman: return s.spearman;
    case Estimator::Quadrant: return s.quadrant;
  }
  return std::nullopt;
}

}  // namespace

std::optional<WeightKind> weight_kind_from_string(std::string_view name) {
  if (name == "auto") return WeightKind::Auto;
  if (name == "weight") return WeightKind::Weight;
  if (name == "incl_prob") return WeightKind::InclProb;
  if (name == "none") return WeightKind::None;
  return std::nullopt;
}

WeightedSample read_sample_csv(std::istream& in, WeightKind kind) {
  std::string line;
  long line_no = 1;
  if (!std::getline(in, line)) throw DataError("empty input: expected a header row", 1);
  std::map<std::string, std::size_t> col;
  const auto header = split_csv_line(line);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!col.emplace(header[i], i).second) throw DataError("duplicate column '" + header[i] + "'", 1);
  }
  for (const char* required : {"y", "x"}) {
    if (!col.count(required)) throw DataError(std::string("missing required column '") + required + "'", 1);
  }
  const bool has_weight = col.count("weight") > 0;
  const bool has_incl = col.count("incl_prob") > 0;
  if (has_weight && has_incl) {
    throw DataError("columns 'weight' and 'incl_prob' are mutually exclusive; supply only one", 1);
  }
  if (kind == WeightKind::Weight && !has_weight) throw DataError("--weight-kind weight needs a 'weight' column", 1);
  if (kind == WeightKind::InclProb && !has_incl) {
    throw DataError("--weight-kind incl_prob needs an 'incl_prob' column", 1);
  }
  const bool use_weight = has_weight && kind != WeightKind::None;
  const bool use_incl = has_incl && kind != WeightKind::None;
  const bool has_stratum = col.count("stratum") > 0;
  const bool has_psu = col.count("psu") > 0;

  std::vector<WeightedRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw DataError("expected " + std::to_string(header.size()) + " fields, found " +
                          std::to_string(f.size()),
                      line_no);
    }
    WeightedRecord rec;
    const std::string& ytext = f[col["y"]];
    if (ytext == "0") {
      rec.y = 0;
    } else if (ytext == "1") {
      rec.y = 1;
    } else {
      throw DataError("column y must be 0 or 1, found '" + ytext + "'", line_no);
    }
    rec.x = parse_real(f[col["x"]], "x", line_no);
    if (!std::isfinite(rec.x)) throw DataError("column x must be finite", line_no);
    if (use_weight) {
      rec.weight = parse_real(f[col["weight"]], "weight", line_no);
      if (!(rec.weight > 0.0) || !std::isfinite(rec.weight)) {
        throw DataError("column weight must be a positive real", line_no);
      }
    } else if (use_incl) {
      const double pi = parse_real(f[col["incl_prob"]], "incl_prob", line_no);
      if (!(pi > 0.0 && pi <= 1.0)) throw DataError("column incl_prob must lie in (0, 1]", line_no);
      rec.weight = 1.0 / pi;
    }
    if (has_stratum && !f[col["stratum"]].empty()) rec.stratum = parse_id(f[col["stratum"]], "stratum", line_no);
    if (has_psu && !f[col["psu"]].empty()) rec.psu = parse_id(f[col["psu"]], "psu", line_no);
    records.push_back(rec);
  }
  if (records.empty()) throw DataError("no data rows", line_no);
  return WeightedSample(std::move(records));
}

WeightedSample read_sample_file(const std::string& path, WeightKind kind) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_sample_csv(in, kind);
}

void write_sample_csv(std::ostream& out, const WeightedSample& sample) {
  const bool design = sample.has_design();
  out << "y,x,weight" << (design ? ",stratum,psu" : "") << '\n';
  for (const auto& rec : sample.records()) {
    out << rec.y << ',' << round_trip(rec.x) << ',' << round_trip(rec.weight);
    if (design) out << ',' << *rec.stratum << ',' << *rec.psu;
    out << '\n';
  }
}

ScenarioConfig parse_scenario_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root,
                 {"scenarios", "r_grid", "replications", "population", "plan", "outlier_rates",
                  "master_seed"},
                 "config");
  ScenarioConfig cfg;
  if (root.contains("scenarios")) {
    const json& list = root["scenarios"];
    if (!list.is_array()) throw ConfigError("'scenarios' must be an array");
    cfg.scenarios.clear();
    for (const json& s : list) {
      reject_unknown(s, {"informativeness", "outlyingness"}, "scenario");
      Scenario sc;
      take(s, "informativeness", sc.informativeness);
      take(s, "outlyingness", sc.outlyingness);
      cfg.scenarios.push_back(sc);
    }
  }
  if (root.contains("r_grid")) {
    const json& g = root["r_grid"];
    if (g.is_array()) {
      take(root, "r_grid", cfg.r_grid);
    } else {
      reject_unknown(g, {"lo", "hi", "n"}, "r_grid");
      double lo = 0.005, hi = 0.995;
      std::size_t n = 50;
      take(g, "lo", lo);
      take(g, "hi", hi);
      take(g, "n", n);
      if (n == 0) throw ConfigError("r_grid.n must be positive");
      cfg.r_grid = linear_grid(lo, hi, n);
    }
  }
  take(root, "replications", cfg.replications);
  take(root, "master_seed", cfg.master_seed);
  if (root.contains("outlier_rates")) {
    std::vector<double> rates;
    take(root, "outlier_rates", rates);
    if (rates.size() != 3) throw ConfigError("'outlier_rates' needs exactly three values");
    std::copy(rates.begin(), rates.end(), cfg.outlier_rates.begin());
  }
  if (root.contains("population")) {
    const json& p = root["population"];
    reject_unknown(p, {"strata", "psus_per_stratum", "size", "prevalence", "auc_halfwidth"}, "population");
    take(p, "strata", cfg.population.strata);
    take(p, "psus_per_stratum", cfg.population.psus_per_stratum);
    take(p, "size", cfg.population.size);
    take(p, "prevalence", cfg.population.prevalence);
    take(p, "auc_halfwidth", cfg.population.auc_halfwidth);
  }
  if (root.contains("plan")) {
    const json& p = root["plan"];
    reject_unknown(p, {"psus_sampled", "sample_size"}, "plan");
    take(p, "psus_sampled", cfg.plan.psus_sampled);
    take(p, "sample_size", cfg.plan.sample_size);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig read_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_config(ss.str());
}

std::string scenario_config_to_json(const ScenarioConfig& config) {
  json root;
  root["scenarios"] = json::array();
  for (const Scenario& s : config.scenarios) {
    root["scenarios"].push_back({{"informativeness", s.informativeness}, {"outlyingness", s.outlyingness}});
  }
  root["r_grid"] = config.r_grid;
  root["replications"] = config.replications;
  root["master_seed"] = config.master_seed;
  root["outlier_rates"] = config.outlier_rates;
  root["population"] = {{"strata", config.population.strata},
                        {"psus_per_stratum", config.population.psus_per_stratum},
                        {"size", config.population.size},
                        {"prevalence", config.population.prevalence},
                        {"auc_halfwidth", config.population.auc_halfwidth}};
  root["plan"] = {{"psus_sampled", config.plan.psus_sampled}, {"sample_size", config.plan.sample_size}};
  return root.dump(2);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_estimate_json(std::ostream& out, const EstimateBundle& bundle,
                         const std::optional<BundleBootstrap>& boot) {
  json root;
  root["prevalence"] = num(bundle.p_hat);
  json stats = json::object(), auc = json::object(), r2 = json::object();
  for (const Estimator e : kAllEstimators) {
    if (const auto v = stat_value(bundle.stats, e)) stats[stat_key(e)] = num(*v);
    const std::string name(to_string(e));
    if (e == Estimator::KendallTw && !bundle.stats.kendall_tw) continue;
    auc[name] = opt_num(bundle.auc_of(e));
    if (e != Estimator::Wilcoxon) r2[name] = opt_num(bundle.r2_of(e));
  }
  root["stats"] = stats;
  root["auc"] = auc;
  root["r2"] = r2;
  if (bundle.auc_pairwise) root["auc_pairwise"] = num(*bundle.auc_pairwise);
  if (!bundle.failures.empty()) root["failures"] = bundle.failures;
  if (boot) {
    json b;
    b["B"] = boot->replicates;
    json se = {{"auc", json::object()}, {"r2", json::object()}};
    json ci = {{"auc", json::object()}, {"r2", json::object()}};
    json degenerate = json::object();
    for (const Estimator e : kAllEstimators) {
      const auto idx = static_cast<std::size_t>(e);
      const std::string name(to_string(e));
      if (const auto& s = boot->auc[idx]) {
        se["auc"][name] = num(s->se);
        ci["auc"][name] = {num(s->ci_low), num(s->ci_high)};
        degenerate[name] = s->degenerate;
      }
      if (const auto& s = boot->r2[idx]) {
        se["r2"][name] = num(s->se);
        ci["r2"][name] = {num(s->ci_low), num(s->ci_high)};
      }
    }
    b["se"] = se;
    b["ci"] = ci;
    b["degenerate"] = degenerate;
    root["bootstrap"] = b;
  }
  out << root.dump(2) << '\n';
}

void write_estimate_csv(std::ostream& out, const EstimateBundle& bundle,
                        const std::optional<BundleBootstrap>& boot) {
  out << "quantity,estimator,value";
  if (boot) out << ",se,ci_low,ci_high";
  out << '\n';
  auto row = [&](const char* quantity, const std::string& name, std::optional<double> v,
                 const std::optional<BootstrapSummary>* s) {
    out << quantity << ',' << name << ',' << (v ? format_number(*v) : "nan");
    if (boot) {
      if (s && *s) {
        out << ',' << format_number((*s)->se) << ',' << format_number((*s)->ci_low) << ','
            << format_number((*s)->ci_high);
      } else {
        out << ",nan,nan,nan";
      }
    }
    out << '\n';
  };
  row("prevalence", "", bundle.p_hat, nullptr);
  for (const Estimator e : kAllEstimators) {
    if (const auto v = stat_value(bundle.stats, e)) row("stat", stat_key(e), v, nullptr);
  }
  for (const Estimator e : kAllEstimators) {
    if (e == Estimator::KendallTw && !bundle.stats.kendall_tw) continue;
    const auto idx = static_cast<std::size_t>(e);
    row("auc", std::string(to_string(e)), bundle.auc_of(e), boot ? &boot->auc[idx] : nullptr);
  }
  for (const Estimator e : kAllEstimators) {
    if (e == Estimator::Wilcoxon || (e == Estimator::KendallTw && !bundle.stats.kendall_tw)) continue;
    const auto idx = static_cast<std::size_t>(e);
    row("r2", std::string(to_string(e)), bundle.r2_of(e), boot ? &boot->r2[idx] : nullptr);
  }
  if (bundle.auc_pairwise) row("auc_pairwise", "Ktw", bundle.auc_pairwise, nullptr);
}

}  // namespace sgcauc
