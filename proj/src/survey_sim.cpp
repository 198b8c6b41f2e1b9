#include "sgcauc/survey_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sgcauc/bridging.hpp"
#include "sgcauc/errors.hpp"
#include "sgcauc/normal.hpp"

namespace sgcauc {

namespace {

// First k entries of a uniformly random permutation of 0..n-1.
std::vector<std::size_t> choose_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

// Allocation shares for strata ordered by decreasing AUC.
std::vector<double> ranked_shares(Informativeness informativeness, std::size_t strata) {
  if (informativeness == Informativeness::None) {
    return std::vector<double>(strata, 1.0 / static_cast<double>(strata));
  }
  if (strata != 10) throw ConfigError("informative allocation presets are defined for 10 strata");
  const double top = informativeness == Informativeness::Moderate ? 0.18 : 0.22;
  const double bottom = informativeness == Informativeness::Moderate ? 0.06 : 0.02;
  return {top, top, top, 0.07, 0.07, 0.07, 0.07, bottom, bottom, bottom};
}

}  // namespace

std::size_t PopulationSpec::psu_size() const {
  return size / (static_cast<std::size_t>(strata) * static_cast<std::size_t>(psus_per_stratum));
}

void PopulationSpec::validate() const {
  if (strata < 2) throw ConfigError("population needs at least two strata");
  if (psus_per_stratum < 1) throw ConfigError("population needs at least one PSU per stratum");
  const auto cells = static_cast<std::size_t>(strata) * static_cast<std::size_t>(psus_per_stratum);
  if (size == 0 || size % cells != 0) {
    throw ConfigError("population size must split evenly into strata x PSUs");
  }
  if (!(prevalence > 0.0 && prevalence < 1.0)) throw ConfigError("prevalence must lie in (0, 1)");
  if (!(auc_halfwidth >= 0.0)) throw ConfigError("AUC half-width must be nonnegative");
  if (!(target_auc - auc_halfwidth > 0.5 && target_auc + auc_halfwidth < 1.0) &&
      !(auc_halfwidth == 0.0 && target_auc >= 0.5 && target_auc < 1.0)) {
    throw ConfigError("stratum AUCs " + std::to_string(target_auc - auc_halfwidth) + ".." +
                      std::to_string(target_auc + auc_halfwidth) + " leave (0.5, 1)");
  }
}

FinitePopulation::FinitePopulation(PopulationSpec spec, std::vector<double> stratum_auc,
                                   std::vector<double> stratum_r, std::vector<double> u,
                                   std::vector<double> v)
    : spec_(spec),
      stratum_auc_(std::move(stratum_auc)),
      stratum_r_(std::move(stratum_r)),
      u_(std::move(u)),
      v_(std::move(v)) {}

int FinitePopulation::stratum_of(std::size_t unit) const {
  return static_cast<int>(unit / (spec_.psu_size() * static_cast<std::size_t>(spec_.psus_per_stratum)));
}

int FinitePopulation::psu_of(std::size_t unit) const {
  return static_cast<int>((unit / spec_.psu_size()) % static_cast<std::size_t>(spec_.psus_per_stratum));
}

std::size_t FinitePopulation::first_unit(int stratum, int psu) const {
  return (static_cast<std::size_t>(stratum) * static_cast<std::size_t>(spec_.psus_per_stratum) +
          static_cast<std::size_t>(psu)) *
         spec_.psu_size();
}

std::vector<double> stratum_aucs(const PopulationSpec& spec) {
  std::vector<double> out(static_cast<std::size_t>(spec.strata));
  const double lo = spec.target_auc - spec.auc_halfwidth;
  const double step = 2.0 * spec.auc_halfwidth / static_cast<double>(spec.strata - 1);
  for (std::size_t h = 0; h < out.size(); ++h) out[h] = lo + step * static_cast<double>(h);
  return out;
}

FinitePopulation build_population(const PopulationSpec& spec, Rng& rng) {
  spec.validate();
  const BridgeContext ctx(spec.prevalence);
  std::vector<double> aucs = stratum_aucs(spec);
  std::vector<double> rs;
  rs.reserve(aucs.size());
  for (const double a : aucs) rs.push_back(latent_correlation_from_auc(a, ctx));

  const std::size_t per_stratum = spec.psu_size() * static_cast<std::size_t>(spec.psus_per_stratum);
  std::vector<double> u(spec.size), v(spec.size);
  std::normal_distribution<double> normal;
  for (std::size_t h = 0; h < rs.size(); ++h) {
    const double r = rs[h];
    const double s = std::sqrt((1.0 - r) * (1.0 + r));
    for (std::size_t k = h * per_stratum; k < (h + 1) * per_stratum; ++k) {
      const double z1 = normal(rng);
      const double z2 = normal(rng);
      u[k] = z1;
      v[k] = r * z1 + s * z2;
    }
  }
  return FinitePopulation(spec, std::move(aucs), std::move(rs), std::move(u), std::move(v));
}

std::vector<std::size_t> allocate_strata(Informativeness informativeness, std::size_t n,
                                         std::span<const double> stratum_auc, int psus_sampled) {
  if (psus_sampled < 1) throw ConfigError("at least one PSU per stratum must be sampled");
  const auto u = static_cast<std::size_t>(psus_sampled);
  if (n % u != 0) throw ConfigError("sample size must be a multiple of the PSUs sampled per stratum");
  const std::size_t strata = stratum_auc.size();
  const std::vector<double> shares = ranked_shares(informativeness, strata);

  // Rank strata by decreasing AUC; ties keep index order.
  std::vector<std::size_t> by_rank(strata);
  std::iota(by_rank.begin(), by_rank.end(), std::size_t{0});
  std::stable_sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
    return stratum_auc[a] > stratum_auc[b];
  });

  // Largest-remainder rounding in units of u so every n_h stays divisible by u.
  const std::size_t blocks = n / u;
  std::vector<std::size_t> count(strata);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < strata; ++k) {
    const double target = shares[k] * static_cast<double>(blocks);
    const auto whole = static_cast<std::size_t>(std::floor(target + 1e-9));
    count[by_rank[k]] = whole;
    assigned += whole;
    remainders.emplace_back(target - static_cast<double>(whole), k);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < blocks; ++i, ++assigned) {
    ++count[by_rank[remainders[i % strata].second]];
  }

  std::vector<std::size_t> n_h(strata);
  for (std::size_t h = 0; h < strata; ++h) {
    if (count[h] == 0) throw ConfigError("allocation leaves a stratum with no sampled units");
    n_h[h] = count[h] * u;
  }
  return n_h;
}

std::vector<double> population_inclusion_probabilities(const FinitePopulation& pop,
                                                       const SamplingPlan& plan) {
  const PopulationSpec& spec = pop.spec();
  const auto n_h = allocate_strata(plan.informativeness, plan.sample_size, pop.stratum_auc(),
                                   plan.psus_sampled);
  const double big_u = spec.psus_per_stratum;
  const double small_u = plan.psus_sampled;
  const auto psu_size = static_cast<double>(spec.psu_size());
  std::vector<double> pi(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double m = static_cast<double>(n_h[static_cast<std::size_t>(pop.stratum_of(i))]) / small_u;
    pi[i] = (small_u / big_u) * m / psu_size;
  }
  return pi;
}

SampleDraw draw_sample(const FinitePopulation& pop, const SamplingPlan& plan, Rng& rng) {
  const PopulationSpec& spec = pop.spec();
  if (plan.psus_sampled > spec.psus_per_stratum) {
    throw ConfigError("cannot sample more PSUs than a stratum holds");
  }
  const auto n_h = allocate_strata(plan.informativeness, plan.sample_size, pop.stratum_auc(),
                                   plan.psus_sampled);
  const std::size_t psu_size = spec.psu_size();
  const auto u = static_cast<std::size_t>(plan.psus_sampled);
  const double big_u = spec.psus_per_stratum;
  const double small_u = plan.psus_sampled;
  const auto nhg = static_cast<double>(psu_size);

  SampleDraw draw;
  std::vector<double> within(plan.sample_size);  // m_h per record, for the pair matrix
  for (int h = 0; h < spec.strata; ++h) {
    const std::size_t m = n_h[static_cast<std::size_t>(h)] / u;
    if (m > psu_size) throw ConfigError("stratum allocation exceeds PSU size");
    const double pi = (small_u / big_u) * static_cast<double>(m) / nhg;
    auto psus = choose_without_replacement(static_cast<std::size_t>(spec.psus_per_stratum), u, rng);
    std::sort(psus.begin(), psus.end());
    for (const std::size_t g : psus) {
      auto members = choose_without_replacement(psu_size, m, rng);
      std::sort(members.begin(), members.end());
      const std::size_t base = pop.first_unit(h, static_cast<int>(g));
      for (const std::size_t k : members) {
        within[draw.units.size()] = static_cast<double>(m);
        draw.units.push_back(base + k);
        draw.stratum.push_back(h);
        draw.psu.push_back(static_cast<int>(g));
        draw.incl_prob.push_back(pi);
      }
    }
  }

  const std::size_t n = draw.size();
  draw.pair_incl_prob.assign(n * n, 0.0);
  const double same_stratum_psus = small_u * (small_u - 1.0) / (big_u * (big_u - 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    draw.pair_incl_prob[i * n + i] = draw.incl_prob[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      double pij;
      if (draw.stratum[i] != draw.stratum[j]) {
        pij = draw.incl_prob[i] * draw.incl_prob[j];
      } else {
        const double m = within[i];
        if (draw.psu[i] == draw.psu[j]) {
          pij = (small_u / big_u) * m * (m - 1.0) / (nhg * (nhg - 1.0));
        } else {
          pij = same_stratum_psus * (m / nhg) * (m / nhg);
        }
      }
      draw.pair_incl_prob[i * n + j] = pij;
      draw.pair_incl_prob[j * n + i] = pij;
    }
  }
  return draw;
}

SimulatedSample contaminate_and_dichotomize(const SampleDraw& draw, const FinitePopulation& pop,
                                            const ContaminationSpec& contamination, Rng& rng) {
  if (!(contamination.rate >= 0.0 && contamination.rate <= 1.0)) {
    throw ConfigError("contamination rate must lie in [0, 1]");
  }
  const std::size_t n = draw.size();
  std::vector<double> u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = pop.u()[draw.units[i]];
    v[i] = pop.v()[draw.units[i]];
  }

  std::vector<std::uint8_t> flagged(n, 0);
  const auto outliers = static_cast<std::size_t>(std::llround(contamination.rate * static_cast<double>(n)));
  if (outliers > 0) {
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> jitter(0.0, contamination.sd);
    for (const std::size_t i : choose_without_replacement(n, outliers, rng)) {
      const double side = coin(rng) ? 1.0 : -1.0;
      u[i] = side * contamination.mean + jitter(rng);
      v[i] = -side * contamination.mean + jitter(rng);
      flagged[i] = 1;
    }
  }

  const double delta = std_normal_quantile(1.0 - pop.spec().prevalence);
  std::vector<WeightedRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    records[i].y = u[i] > delta ? 1 : 0;
    records[i].x = v[i];
    records[i].weight = 1.0 / draw.incl_prob[i];
    records[i].stratum = draw.stratum[i];
    records[i].psu = draw.psu[i];
  }
  std::vector<double> pair_w(n * n);
  for (std::size_t k = 0; k < n * n; ++k) pair_w[k] = 1.0 / draw.pair_incl_prob[k];

  return {WeightedSample(std::move(records), PairwiseWeights(n, std::move(pair_w))),
          std::move(flagged)};
}

}  // namespace sgcauc
