#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sgcauc/rng.hpp"
#include "sgcauc/sample.hpp"

namespace sgcauc {

/// Finite population of H strata x U equal-size PSUs.
struct PopulationSpec {
  int strata = 10;
  int psus_per_stratum = 10;
  std::size_t size = 60000;
  double target_auc = 0.8;
  double prevalence = 0.5;
  double auc_halfwidth = 0.1;

  std::size_t psu_size() const;
  void validate() const;
};

enum class Informativeness { None = 0, Moderate = 1, Strong = 2 };

struct SamplingPlan {
  int psus_sampled = 2;
  std::size_t sample_size = 600;
  Informativeness informativeness = Informativeness::None;
};

/// Latent outliers replace (U, V) by N2(+-mean, -+mean, sd^2 I).
struct ContaminationSpec {
  double rate = 0.0;
  double mean = 4.0;
  double sd = 0.01;
};

/// Latent bivariate normal population. Unit i sits in stratum i / (U * N_hg)
/// and PSU (i / N_hg) % U.
class FinitePopulation {
 public:
  FinitePopulation(PopulationSpec spec, std::vector<double> stratum_auc,
                   std::vector<double> stratum_r, std::vector<double> u, std::vector<double> v);

  const PopulationSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return u_.size(); }
  std::span<const double> stratum_auc() const noexcept { return stratum_auc_; }
  std::span<const double> stratum_r() const noexcept { return stratum_r_; }
  std::span<const double> u() const noexcept { return u_; }
  std::span<const double> v() const noexcept { return v_; }

  int stratum_of(std::size_t unit) const;
  int psu_of(std::size_t unit) const;
  std::size_t first_unit(int stratum, int psu) const;

 private:
  PopulationSpec spec_;
  std::vector<double> stratum_auc_;
  std::vector<double> stratum_r_;
  std::vector<double> u_;
  std::vector<double> v_;
};

/// Stratum AUCs equally spaced on [A - halfwidth, A + halfwidth].
std::vector<double> stratum_aucs(const PopulationSpec& spec);

FinitePopulation build_population(const PopulationSpec& spec, Rng& rng);

/// Stratum sample sizes n_h (indexed like stratum_auc), each a positive
/// multiple of psus_sampled and summing to n. Moderate/Strong need H = 10.
std::vector<std::size_t> allocate_strata(Informativeness informativeness, std::size_t n,
                                         std::span<const double> stratum_auc, int psus_sampled);

/// Two-stage stratified SRSWOR draw with its first- and second-order
/// inclusion probabilities.
struct SampleDraw {
  std::vector<std::size_t> units;
  std::vector<int> stratum;
  std::vector<int> psu;
  std::vector<double> incl_prob;
  std::vector<double> pair_incl_prob;  // row-major n x n; diagonal holds pi_i

  std::size_t size() const noexcept { return units.size(); }
  double pair(std::size_t i, std::size_t j) const { return pair_incl_prob[i * size() + j]; }
};

/// pi_i for every population unit under the plan.
std::vector<double> population_inclusion_probabilities(const FinitePopulation& pop,
                                                       const SamplingPlan& plan);

SampleDraw draw_sample(const FinitePopulation& pop, const SamplingPlan& plan, Rng& rng);

struct SimulatedSample {
  WeightedSample sample;
  std::vector<std::uint8_t> contaminated;
};

/// Replaces a uniformly chosen fraction of the drawn units with latent
/// outliers, then sets y = I(U > delta) at the population threshold and x = V.
/// Weights are 1 / pi_i; pairwise weights 1 / pi_ij.
SimulatedSample contaminate_and_dichotomize(const SampleDraw& draw, const FinitePopulation& pop,
                                            const ContaminationSpec& contamination, Rng& rng);

}  // namespace sgcauc
