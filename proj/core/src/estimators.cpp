#include "rqmcmix/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "rqmcmix/errors.hpp"
#include "rqmcmix/seeds.hpp"

namespace rqmcmix {

namespace {

// Selector over fractions sorted non-increasing, with the interval
// positions mapped back to stratum indices.
struct SelectorPlan {
  StratumSelector selector;
  std::vector<int> stratum_at;  // interval position -> stratum
};

SelectorPlan make_selector_plan(std::span<const double> beta) {
  std::vector<int> order(beta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return beta[static_cast<std::size_t>(a)] > beta[static_cast<std::size_t>(b)];
  });
  std::vector<double> sorted(beta.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    sorted[p] = beta[static_cast<std::size_t>(order[p])];
  }
  return {build_selector(sorted), std::move(order)};
}

// Weighted sample mean over one stream of (s+1)-dimensional points whose
// first coordinate picks the stratum.
EstimateResult weighted_stream_estimate(const MixtureSpec& spec, const Integrand& g,
                                        std::span<const double> beta, const PointArray& points) {
  spec.validate();
  const int s = spec.coords();
  if (points.dim != s + 1) throw std::invalid_argument("points must have s + 1 coordinates");

  const SelectorPlan plan = make_selector_plan(beta);
  EstimateResult result;
  result.stratum_counts.assign(spec.alpha.size(), 0);
  std::vector<double> x(static_cast<std::size_t>(s));
  double sum = 0.0;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = points.row(i);
    const int l = plan.stratum_at[static_cast<std::size_t>(select_stratum(plan.selector, row[0]))];
    const auto& dists = spec.transforms[static_cast<std::size_t>(l)];
    for (int j = 0; j < s; ++j) {
      x[static_cast<std::size_t>(j)] = quantile(dists[static_cast<std::size_t>(j)], row[j + 1]);
    }
    const double w = spec.alpha[static_cast<std::size_t>(l)] / beta[static_cast<std::size_t>(l)];
    sum += w * g(l, x);
    ++result.stratum_counts[static_cast<std::size_t>(l)];
  }
  result.value = sum / static_cast<double>(n);
  return result;
}

PointArray scrambled_unit_points(const DirectionNumbers& dirs, int d, int m, std::uint64_t seed,
                                 ScrambleKind kind) {
  return to_unit_cube(scramble(sobol_points(dirs, d, m), kind, seed));
}

int exponent_of(std::int64_t n) {
  if (n < 1 || !std::has_single_bit(static_cast<std::uint64_t>(n))) {
    throw std::invalid_argument("stratum sizes must be powers of two");
  }
  return std::countr_zero(static_cast<std::uint64_t>(n));
}

}  // namespace

EstimateResult estimate_mc(const MixtureSpec& spec, const Integrand& g, std::int64_t n,
                           std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("need n >= 1");
  const int d = spec.coords() + 1;
  PointArray points(static_cast<std::size_t>(n), d);
  for (std::int64_t i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      points.at(static_cast<std::size_t>(i), j) =
          uniform_double(seed, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(d) +
                                   static_cast<std::uint64_t>(j));
    }
  }
  return weighted_stream_estimate(spec, g, spec.alpha, points);
}

EstimateResult estimate_rqmc_plain(const MixtureSpec& spec, const Integrand& g,
                                   const DirectionNumbers& dirs, int m, std::uint64_t seed,
                                   ScrambleKind kind) {
  spec.validate();
  const PointArray points = scrambled_unit_points(dirs, spec.coords() + 1, m, seed, kind);
  return weighted_stream_estimate(spec, g, spec.alpha, points);
}

EstimateResult estimate_rqmc_adjusted(const MixtureSpec& spec, const Integrand& g,
                                      const AllocationRule& rule, const DirectionNumbers& dirs,
                                      int m, std::uint64_t seed, ScrambleKind kind) {
  spec.validate();
  const AllocationPlan plan = integer_allocation(spec.alpha, rule, std::int64_t{1} << m);
  const PointArray points = scrambled_unit_points(dirs, spec.coords() + 1, m, seed, kind);
  return weighted_stream_estimate(spec, g, plan.beta, points);
}

EstimateResult estimate_rqmc_pow2(const MixtureSpec& spec, const Integrand& g,
                                  const AllocationRule& rule, const DirectionNumbers& dirs, int m,
                                  std::uint64_t seed, ScrambleKind kind) {
  spec.validate();
  const AllocationPlan plan = forward_power_of_two(spec.alpha, rule, std::int64_t{1} << m);
  const PointArray points = scrambled_unit_points(dirs, spec.coords() + 1, m, seed, kind);
  return weighted_stream_estimate(spec, g, plan.beta, points);
}

EstimateResult estimate_rqmc_per_stratum(const MixtureSpec& spec, const Integrand& g,
                                         std::span<const std::int64_t> counts,
                                         const DirectionNumbers& dirs, std::uint64_t seed,
                                         ScrambleKind kind) {
  spec.validate();
  if (counts.size() != spec.alpha.size()) throw std::invalid_argument("one size per stratum");
  const int s = spec.coords();

  EstimateResult result;
  result.stratum_counts.assign(counts.begin(), counts.end());
  std::vector<double> x(static_cast<std::size_t>(s));
  for (int l = 0; l < spec.strata(); ++l) {
    const int ml = exponent_of(counts[static_cast<std::size_t>(l)]);
    const PointArray points =
        scrambled_unit_points(dirs, s, ml, split_seed(seed, static_cast<std::uint64_t>(l)), kind);
    const auto& dists = spec.transforms[static_cast<std::size_t>(l)];
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto row = points.row(i);
      for (int j = 0; j < s; ++j) {
        x[static_cast<std::size_t>(j)] = quantile(dists[static_cast<std::size_t>(j)], row[j]);
      }
      sum += g(l, x);
    }
    result.value += spec.alpha[static_cast<std::size_t>(l)] * sum / static_cast<double>(points.size());
  }
  return result;
}

double estimate_mixture_is(
    const Integrand& g, const Density& target_density, const ComponentDensity& component_density,
    std::span<const double> alpha,
    const std::function<std::vector<double>(std::int64_t, std::uint64_t)>& sampler,
    std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  if (alpha.empty()) throw std::invalid_argument("need at least one component");
  double sum = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::vector<double> x = sampler(i, seed);
    double mixture = 0.0;
    for (std::size_t l = 0; l < alpha.size(); ++l) {
      mixture += alpha[l] * component_density(static_cast<int>(l), x);
    }
    const double numerator = g(0, x) * target_density(x);
    if (mixture <= 0.0) {
      if (numerator != 0.0) {
        throw NumericError("mixture density vanished at a point with nonzero integrand");
      }
      continue;
    }
    sum += numerator / mixture;
  }
  return sum / static_cast<double>(n);
}

std::function<std::vector<double>(std::int64_t, std::uint64_t)> make_mixture_sampler(
    const MixtureSpec& spec) {
  spec.validate();
  auto plan = std::make_shared<SelectorPlan>(make_selector_plan(spec.alpha));
  auto holder = std::make_shared<MixtureSpec>(spec);
  const int s = spec.coords();
  return [plan, holder, s](std::int64_t i, std::uint64_t seed) {
    const std::uint64_t base = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(s + 1);
    const double v = uniform_double(seed, base);
    const int l = plan->stratum_at[static_cast<std::size_t>(select_stratum(plan->selector, v))];
    std::vector<double> u(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) {
      u[static_cast<std::size_t>(j)] = uniform_double(seed, base + 1 + static_cast<std::uint64_t>(j));
    }
    return transform(*holder, l, u);
  };
}

EstimatorReport replicate_variance(const std::string& name, std::int64_t n,
                                   const std::function<EstimateResult(std::uint64_t)>& estimator,
                                   int replicate_count, std::uint64_t master_seed, int threads) {
  if (replicate_count < 2) throw std::invalid_argument("need at least two replicates");
  if (threads < 1) threads = 1;

  EstimatorReport report;
  report.name = name;
  report.n = n;
  report.replicates.resize(static_cast<std::size_t>(replicate_count));
  report.stratum_counts.resize(static_cast<std::size_t>(replicate_count));

  const auto run_range = [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      const EstimateResult est = estimator(split_seed(master_seed, static_cast<std::uint64_t>(r)));
      report.replicates[static_cast<std::size_t>(r)] = est.value;
      report.stratum_counts[static_cast<std::size_t>(r)] = est.stratum_counts;
    }
  };

  const int workers = std::min(threads, replicate_count);
  if (workers <= 1) {
    run_range(0, replicate_count);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const int chunk = (replicate_count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(replicate_count, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  double mean = 0.0;
  for (double v : report.replicates) mean += v;
  mean /= static_cast<double>(replicate_count);
  double ss = 0.0;
  for (double v : report.replicates) ss += (v - mean) * (v - mean);
  report.mean = mean;
  report.variance = ss / static_cast<double>(replicate_count - 1);
  return report;
}

double fit_log2_slope(std::span<const std::pair<double, double>> n_variance_pairs) {
  if (n_variance_pairs.size() < 2) throw std::invalid_argument("need at least two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [n, variance] : n_variance_pairs) {
    if (!(n > 0.0) || !(variance > 0.0)) {
      throw std::invalid_argument("sample sizes and variances must be positive");
    }
    const double x = std::log2(n);
    const double y = std::log2(variance);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = static_cast<double>(n_variance_pairs.size());
  const double denom = count * sxx - sx * sx;
  if (!(denom > 0.0)) throw std::invalid_argument("need at least two distinct sample sizes");
  return (count * sxy - sx * sy) / denom;
}

}  // namespace rqmcmix
