#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rqmcmix/point_array.hpp"

namespace rqmcmix {

/// Quality parameters of a base-2 digital net: 2^m points in [0,1)^d such
/// that every elementary interval of volume >= 2^{t-m} holds its share.
struct NetParams {
  int t = 0;
  int m = 0;
  int d = 1;
};

/// Dyadic box prod_j [c_j 2^{-k_j}, (c_j+1) 2^{-k_j}).
struct ElementaryInterval {
  std::vector<int> levels;            // k_j >= 0
  std::vector<std::int64_t> cells;    // 0 <= c_j < 2^{k_j}

  int total_level() const;
  double volume() const;              // 2^{-|k|}
  double lower(int j) const;          // c_j 2^{-k_j}
  double upper(int j) const;
};

struct NetCheckResult {
  bool pass = true;
  ElementaryInterval witness;         // first failing interval when !pass
  std::int64_t expected = 0;          // 2^{m-|k|}
  std::int64_t actual = 0;
};

struct DiscrepancyReport {
  double value = 0.0;                 // star discrepancy
  std::vector<double> corner;         // a at which |local discrepancy| peaks
  std::int64_t n = 0;
  int dim = 0;
};

/// Count in the stratum interval [a, b) plus the stratified-input bounds
/// ceil(n beta) - 2 <= count <= floor(n beta) + 2 with beta = b - a.
struct IntervalCount {
  std::int64_t count = 0;
  std::int64_t lower_bound = 0;
  std::int64_t upper_bound = 0;
  bool within_bounds = true;
};

/// (1/n) #{x_i in [0, a)} - prod_j a_j.  Corners live in [0,1)^d.
double local_discrepancy(const PointArray& points, std::span<const double> corner);

/// Exact star discrepancy by searching the critical corners (the coordinate
/// values, their successors, and the left neighbor of 1).  Supported for
/// d <= 3 and n <= 4096; larger inputs are rejected, not approximated.
DiscrepancyReport star_discrepancy_exact(const PointArray& points);

/// True iff every elementary interval with |k| <= m - t holds exactly
/// 2^{m-|k|} points.  Checks the binding level |k| = m - t; coarser levels
/// follow by aggregating refinements.
NetCheckResult verify_net(const PointArray& points, const NetParams& params);

/// Smallest t for which verify_net passes; m when only the trivial level does.
int min_t(const PointArray& points, int m, int d);

/// True iff for every coordinate each interval [k/n, (k+1)/n) holds exactly
/// one of the n values.
bool verify_stratified(const PointArray& points);

/// Counts stratified values in [a, b) and evaluates the two-sided bound
/// that stratification guarantees.  Values that are not stratified are a
/// contract violation and are rejected.
IntervalCount count_in_interval(std::span<const double> values, double a, double b);

}  // namespace rqmcmix
