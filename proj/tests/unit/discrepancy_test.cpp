#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "rqmcmix/digital_net.hpp"
#include "rqmcmix/directions.hpp"
#include "rqmcmix/discrepancy.hpp"
#include "rqmcmix/errors.hpp"
#include "rqmcmix/mixture.hpp"
#include "rqmcmix/seeds.hpp"

using namespace rqmcmix;

namespace {

PointArray points_1d(const std::vector<double>& xs) {
  PointArray pts(xs.size(), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) pts.at(i, 0) = xs[i];
  return pts;
}

PointArray random_points(int n, int d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  PointArray pts(n, d);
  for (double& v : pts.values) v = unif(gen);
  return pts;
}

/// Closed-form star discrepancy in one dimension:
/// D* = 1/(2n) + max_i |x_(i) - (2i-1)/(2n)|.
double star_1d_formula(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    worst = std::max(worst, std::abs(xs[i] - (2.0 * (i + 1) - 1.0) / (2.0 * n)));
  }
  return 1.0 / (2.0 * n) + worst;
}

/// Brute-force sup over the critical corner grid: every coordinate value,
/// its successor, and the left neighbour of one, in every dimension.
double star_bruteforce(const PointArray& pts) {
  const double below_one = std::nextafter(1.0, 0.0);
  std::vector<std::vector<double>> candidates(pts.dim);
  for (int j = 0; j < pts.dim; ++j) {
    auto& c = candidates[j];
    c.push_back(below_one);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double v = pts.at(i, j);
      c.push_back(v);
      const double up = std::nextafter(v, 2.0);
      if (up < 1.0) c.push_back(up);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  double worst = 0.0;
  std::vector<double> corner(pts.dim);
  std::vector<std::size_t> idx(pts.dim, 0);
  while (true) {
    for (int j = 0; j < pts.dim; ++j) corner[j] = candidates[j][idx[j]];
    worst = std::max(worst, std::abs(local_discrepancy(pts, corner)));
    int j = 0;
    for (; j < pts.dim; ++j) {
      if (++idx[j] < candidates[j].size()) break;
      idx[j] = 0;
    }
    if (j == pts.dim) break;
  }
  return worst;
}

/// Literal definition of the net property: every shape with |k| <= m - t,
/// every cell, counted directly.
bool net_by_definition(const PointArray& pts, int t, int m) {
  const int d = pts.dim;
  const int budget = m - t;
  std::vector<int> levels(d, 0);
  const auto count_cell = [&](const std::vector<std::int64_t>& cells) {
    std::int64_t count = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      bool inside = true;
      for (int j = 0; j < d && inside; ++j) {
        const double lo = std::ldexp(static_cast<double>(cells[j]), -levels[j]);
        const double hi = std::ldexp(static_cast<double>(cells[j] + 1), -levels[j]);
        inside = pts.at(i, j) >= lo && pts.at(i, j) < hi;
      }
      if (inside) ++count;
    }
    return count;
  };
  // Enumerate shapes as compositions of q <= budget over d coordinates.
  std::vector<std::int64_t> cells(d, 0);
  const std::function<bool(int, int)> shapes = [&](int j, int left) -> bool {
    if (j == d) {
      const int total = budget - left;
      std::fill(cells.begin(), cells.end(), 0);
      while (true) {
        if (count_cell(cells) != (std::int64_t{1} << (m - total))) return false;
        int jj = 0;
        for (; jj < d; ++jj) {
          if (++cells[jj] < (std::int64_t{1} << levels[jj])) break;
          cells[jj] = 0;
        }
        if (jj == d) break;
      }
      return true;
    }
    for (int k = 0; k <= left; ++k) {
      levels[j] = k;
      if (!shapes(j + 1, left - k)) return false;
    }
    return true;
  };
  return shapes(0, budget);
}

}  // namespace

TEST_SUITE("discrepancy") {

TEST_CASE("local discrepancy on pinned examples") {
  const PointArray two = points_1d({0.0, 0.5});
  std::vector<double> corner{0.75};
  CHECK(local_discrepancy(two, corner) == doctest::Approx(0.25).epsilon(1e-15));
  corner[0] = 0.0;
  CHECK(local_discrepancy(two, corner) == 0.0);

  const auto& dirs = embedded_direction_numbers();
  const PointArray vdc = to_unit_cube(sobol_points(dirs, 1, 3));
  corner[0] = 0.5;
  CHECK(local_discrepancy(vdc, corner) == 0.0);

  corner[0] = 1.0;
  CHECK_THROWS_AS(local_discrepancy(two, corner), std::invalid_argument);
  corner[0] = -0.1;
  CHECK_THROWS_AS(local_discrepancy(two, corner), std::invalid_argument);
}

TEST_CASE("star discrepancy of a single point at the origin is one") {
  const DiscrepancyReport report = star_discrepancy_exact(points_1d({0.0}));
  CHECK(report.value == 1.0);
  CHECK(report.n == 1);
}

TEST_CASE("star discrepancy of equally spaced points is 1/n") {
  for (int n : {1, 2, 5, 16}) {
    std::vector<double> xs;
    for (int k = 0; k < n; ++k) xs.push_back(static_cast<double>(k) / n);
    const DiscrepancyReport report = star_discrepancy_exact(points_1d(xs));
    CHECK(report.value == doctest::Approx(1.0 / n).epsilon(1e-13));
  }
}

TEST_CASE("one-dimensional search matches the closed formula") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 1 + static_cast<int>(seed % 60);
    const PointArray pts = random_points(n, 1, seed);
    const DiscrepancyReport report = star_discrepancy_exact(pts);
    std::vector<double> xs(pts.values);
    CHECK(report.value == doctest::Approx(star_1d_formula(xs)).epsilon(1e-12));
  }
}

TEST_CASE("low-dimensional search matches the brute-force corner grid") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    for (int d : {2, 3}) {
      const int n = 4 + static_cast<int>(seed % 12);
      const PointArray pts = random_points(n, d, 1000 * d + seed);
      const DiscrepancyReport report = star_discrepancy_exact(pts);
      CHECK(report.value == doctest::Approx(star_bruteforce(pts)).epsilon(1e-12));
    }
  }
}

TEST_CASE("reported corner reproduces the reported value") {
  for (std::uint64_t seed = 50; seed < 70; ++seed) {
    const PointArray pts = random_points(20, 2, seed);
    const DiscrepancyReport report = star_discrepancy_exact(pts);
    CHECK(std::abs(std::abs(local_discrepancy(pts, report.corner)) - report.value) <= 1e-12);
    CHECK(report.value >= 0.0);
    CHECK(report.value <= 1.0);
  }
}

TEST_CASE("star discrepancy rejects unsupported sizes") {
  CHECK_THROWS_AS(star_discrepancy_exact(random_points(8, 4, 1)), CapabilityError);
  CHECK_THROWS_AS(star_discrepancy_exact(random_points(4100, 1, 1)), CapabilityError);
}

TEST_CASE("scrambled net beats i.i.d. uniforms on star discrepancy") {
  const auto& dirs = embedded_direction_numbers();
  const DigitalPointSet base = sobol_points(dirs, 2, 8);
  int wins = 0;
  const int pairs = 100;
  for (std::uint64_t seed = 0; seed < pairs; ++seed) {
    const PointArray net =
        to_unit_cube(scramble(base, ScrambleKind::nested_uniform, seed));
    const PointArray iid = random_points(256, 2, 777 + seed);
    if (star_discrepancy_exact(net).value < star_discrepancy_exact(iid).value) ++wins;
  }
  CHECK(wins >= 95);
}

TEST_CASE("verify_net pinned examples") {
  const auto& dirs = embedded_direction_numbers();

  const PointArray one = points_1d({0.37});
  CHECK(verify_net(one, {0, 0, 1}).pass);

  const PointArray vdc = to_unit_cube(sobol_points(dirs, 1, 3));
  CHECK(verify_net(vdc, {0, 3, 1}).pass);

  PointArray grid(4, 2);
  const double coords[4][2] = {{0, 0}, {0, 0.5}, {0.5, 0}, {0.5, 0.5}};
  for (int i = 0; i < 4; ++i) {
    grid.at(i, 0) = coords[i][0];
    grid.at(i, 1) = coords[i][1];
  }
  const NetCheckResult bad = verify_net(grid, {0, 2, 2});
  REQUIRE_FALSE(bad.pass);
  REQUIRE(bad.witness.levels.size() == 2);
  CHECK(bad.witness.levels[0] == 2);
  CHECK(bad.witness.levels[1] == 0);
  CHECK(bad.witness.cells[0] == 0);
  CHECK(bad.witness.cells[1] == 0);
  CHECK(bad.expected == 1);
  CHECK(bad.actual == 2);

  CHECK(min_t(grid, 2, 2) == 1);
  CHECK(min_t(vdc, 3, 1) == 0);
}

TEST_CASE("verify_net and min_t agree with the literal definition") {
  const auto& dirs = embedded_direction_numbers();
  for (int d : {1, 2, 3}) {
    for (int m : {2, 4, 6}) {
      const DigitalPointSet base = sobol_points(dirs, d, m);
      const PointArray pts = to_unit_cube(scramble(base, ScrambleKind::nested_uniform, 5 + d));
      const int t = min_t(pts, m, d);
      CHECK(net_by_definition(pts, t, m));
      if (t > 0) CHECK_FALSE(net_by_definition(pts, t - 1, m));
      for (int probe = 0; probe <= m; ++probe) {
        CHECK(verify_net(pts, {probe, m, d}).pass == net_by_definition(pts, probe, m));
      }
    }
  }
}

TEST_CASE("min_t of a degenerate set is m") {
  PointArray same(8, 1);
  for (int i = 0; i < 8; ++i) same.at(i, 0) = 0.25;
  CHECK(min_t(same, 3, 1) == 3);
}

TEST_CASE("verify_stratified examples") {
  std::vector<double> xs;
  for (int k = 0; k < 16; ++k) xs.push_back(k / 16.0);
  CHECK(verify_stratified(points_1d(xs)));

  CHECK_FALSE(verify_stratified(points_1d({0.3, 0.3})));

  const auto& dirs = embedded_direction_numbers();
  const PointArray sobol5 =
      to_unit_cube(scramble(sobol_points(dirs, 5, 10), ScrambleKind::nested_uniform, 9));
  CHECK(verify_stratified(sobol5));
}

TEST_CASE("count_in_interval pinned examples") {
  const auto& dirs = embedded_direction_numbers();
  const PointArray pts =
      to_unit_cube(scramble(sobol_points(dirs, 1, 3), ScrambleKind::nested_uniform, 4));
  std::vector<double> values(pts.values);

  const IntervalCount half = count_in_interval(values, 0.0, 0.5);
  CHECK(half.count == 4);  // dyadic interval of an m=3 net: exact share
  CHECK(half.lower_bound == 2);
  CHECK(half.upper_bound == 6);
  CHECK(half.within_bounds);

  const IntervalCount tiny = count_in_interval(values, 0.201, 0.212);
  CHECK(tiny.count >= 0);
  CHECK(tiny.count <= 1);

  std::vector<double> spaced;
  for (int k = 0; k < 8; ++k) spaced.push_back(k / 8.0);
  for (int j = 1; j <= 8; ++j) {
    CHECK(count_in_interval(spaced, 0.0, j / 8.0).count == j);
  }

  CHECK_THROWS_AS(count_in_interval(std::vector<double>{0.1, 0.11}, 0.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(count_in_interval(values, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("within-stratum discrepancy shrinks at the expected rate") {
  // Sub-points of a non-dyadic stratum still have low discrepancy: growing
  // the net by a factor of four should at least halve D* most of the time.
  const auto& dirs = embedded_direction_numbers();
  const StratumSelector selector = build_selector(std::vector<double>{0.5, 0.3, 0.2});
  int good = 0, trials = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (int m : {8, 10}) {
      const auto star_of_stratum = [&](int mm) {
        const PointArray pts =
            to_unit_cube(scramble(sobol_points(dirs, 2, mm), ScrambleKind::nested_uniform,
                                  split_seed(seed, static_cast<std::uint64_t>(mm))));
        std::vector<double> sub;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const double v = pts.at(i, 0);
          if (v >= selector.bounds[1] && v < selector.bounds[2]) sub.push_back(pts.at(i, 1));
        }
        return star_discrepancy_exact(points_1d(sub)).value;
      };
      ++trials;
      if (star_of_stratum(m + 2) <= 0.5 * star_of_stratum(m)) ++good;
    }
  }
  CHECK(good * 2 > trials);
}

}  // TEST_SUITE
