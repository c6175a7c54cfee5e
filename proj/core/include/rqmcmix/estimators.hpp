#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rqmcmix/allocation.hpp"
#include "rqmcmix/digital_net.hpp"
#include "rqmcmix/mixture.hpp"

namespace rqmcmix {

/// Integrand evaluated on transformed samples; receives the stratum index
/// so per-stratum integrands are possible (the bundled models ignore it).
using Integrand = std::function<double(int l, std::span<const double> x)>;

/// Density of a target or component distribution at a sample point.
using Density = std::function<double(std::span<const double> x)>;
using ComponentDensity = std::function<double(int l, std::span<const double> x)>;

/// One estimate plus how many points landed in each stratum.
struct EstimateResult {
  double value = 0.0;
  std::vector<std::int64_t> stratum_counts;
};

struct EstimatorReport {
  std::string name;
  std::int64_t n = 0;
  std::vector<double> replicates;
  double mean = 0.0;
  double variance = 0.0;                              // unbiased sample variance
  std::vector<std::vector<std::int64_t>> stratum_counts;  // per replicate
};

/// Plain Monte Carlo: i.i.d. uniforms, strata drawn with fractions alpha,
/// unit weights.
EstimateResult estimate_mc(const MixtureSpec& spec, const Integrand& g, std::int64_t n,
                           std::uint64_t seed);

/// Scrambled-net estimator with fractions alpha and unit weights.
EstimateResult estimate_rqmc_plain(const MixtureSpec& spec, const Integrand& g,
                                   const DirectionNumbers& dirs, int m, std::uint64_t seed,
                                   ScrambleKind kind = ScrambleKind::nested_uniform);

/// Scrambled-net estimator with integer-rounded fractions from `rule` and
/// importance weights alpha_l / beta_l.
EstimateResult estimate_rqmc_adjusted(const MixtureSpec& spec, const Integrand& g,
                                      const AllocationRule& rule, const DirectionNumbers& dirs,
                                      int m, std::uint64_t seed,
                                      ScrambleKind kind = ScrambleKind::nested_uniform);

/// Scrambled-net estimator with power-of-two fractions from the forward
/// doubling rule; sub-blocks per stratum are themselves digital nets.
EstimateResult estimate_rqmc_pow2(const MixtureSpec& spec, const Integrand& g,
                                  const AllocationRule& rule, const DirectionNumbers& dirs, int m,
                                  std::uint64_t seed,
                                  ScrambleKind kind = ScrambleKind::nested_uniform);

/// Independent scrambled net of size counts[l] inside each stratum;
/// combination sum_l alpha_l mean_l.  Each count must be a power of two.
EstimateResult estimate_rqmc_per_stratum(const MixtureSpec& spec, const Integrand& g,
                                         std::span<const std::int64_t> counts,
                                         const DirectionNumbers& dirs, std::uint64_t seed,
                                         ScrambleKind kind = ScrambleKind::nested_uniform);

/// Importance-sampling estimate of E_p[g] from mixture draws:
/// (1/n) sum g(x_i) p(x_i) / sum_l alpha_l p_l(x_i).  The sampler maps
/// (point index, seed) to a draw from the mixture.
double estimate_mixture_is(
    const Integrand& g, const Density& target_density, const ComponentDensity& component_density,
    std::span<const double> alpha,
    const std::function<std::vector<double>(std::int64_t, std::uint64_t)>& sampler,
    std::int64_t n, std::uint64_t seed);

/// Draws (v, u) by counter-based uniforms, selects the stratum with
/// fractions alpha and transforms; a ready-made sampler for the estimator
/// above.
std::function<std::vector<double>(std::int64_t, std::uint64_t)> make_mixture_sampler(
    const MixtureSpec& spec);

/// Runs `estimator` R times on sub-seeds split from `master_seed` and
/// reports the replicate mean and unbiased sample variance.  Replicates
/// may run on up to `threads` threads; results do not depend on the
/// scheduling.
EstimatorReport replicate_variance(const std::string& name, std::int64_t n,
                                   const std::function<EstimateResult(std::uint64_t)>& estimator,
                                   int replicate_count, std::uint64_t master_seed,
                                   int threads = 1);

/// Least-squares slope of log2(variance) against log2(n).
double fit_log2_slope(std::span<const std::pair<double, double>> n_variance_pairs);

}  // namespace rqmcmix
