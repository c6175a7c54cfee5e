#include <benchmark/benchmark.h>

#include <cstdint>

#include "rqmcmix/allocation.hpp"
#include "rqmcmix/digital_net.hpp"
#include "rqmcmix/directions.hpp"
#include "rqmcmix/discrepancy.hpp"
#include "rqmcmix/distributions.hpp"
#include "rqmcmix/estimators.hpp"
#include "rqmcmix/models.hpp"

namespace {

using namespace rqmcmix;

void bm_sobol_points(benchmark::State& state) {
  const DirectionNumbers& dirs = embedded_direction_numbers();
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sobol_points(dirs, 5, m));
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << m) * 5);
}
BENCHMARK(bm_sobol_points)->Arg(8)->Arg(12);

void bm_scramble_nested(benchmark::State& state) {
  const DigitalPointSet base = sobol_points(embedded_direction_numbers(), 5, 12);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scramble(base, ScrambleKind::nested_uniform, seed++));
  }
  state.SetItemsProcessed(state.iterations() * base.size() * 5);
}
BENCHMARK(bm_scramble_nested);

void bm_scramble_linear(benchmark::State& state) {
  const DigitalPointSet base = sobol_points(embedded_direction_numbers(), 5, 12);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scramble(base, ScrambleKind::linear_shift, seed++));
  }
  state.SetItemsProcessed(state.iterations() * base.size() * 5);
}
BENCHMARK(bm_scramble_linear);

void bm_min_t(benchmark::State& state) {
  const PointArray points =
      to_unit_cube(scramble(sobol_points(embedded_direction_numbers(), 3, 10),
                            ScrambleKind::nested_uniform, 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_t(points, 10, 3));
  }
}
BENCHMARK(bm_min_t);

void bm_gamma_quantile(benchmark::State& state) {
  const DistributionSpec dist = DistributionSpec::make_gamma(90.0, 1.0 / 3.0);
  double u = 0.0;
  for (auto _ : state) {
    u += 1e-6;
    if (u >= 1.0) u = 1e-6;
    benchmark::DoNotOptimize(quantile(dist, u));
  }
}
BENCHMARK(bm_gamma_quantile);

void bm_flood_replicate(benchmark::State& state) {
  const Model model = flood_model();
  const DirectionNumbers& dirs = embedded_direction_numbers();
  const int m = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate_rqmc_plain(model.spec, model.integrand, dirs, m, seed++));
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << m));
}
BENCHMARK(bm_flood_replicate)->Arg(8)->Arg(12);

void bm_forward_power_of_two(benchmark::State& state) {
  const std::vector<double> alpha{0.50, 0.44, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01};
  AllocationRule rule;
  rule.rho = 3.0;
  rule.power_of_two = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_power_of_two(alpha, rule, 4096));
  }
}
BENCHMARK(bm_forward_power_of_two);

}  // namespace

BENCHMARK_MAIN();
