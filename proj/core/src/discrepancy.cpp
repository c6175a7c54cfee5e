#include "rqmcmix/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "rqmcmix/errors.hpp"

namespace rqmcmix {

namespace {

const double kBelowOne = std::nextafter(1.0, 0.0);

double step_up(double x) { return std::nextafter(x, 2.0); }

void validate_unit_points(const PointArray& points) {
  if (points.dim < 1 || points.size() < 1) {
    throw std::invalid_argument("need at least one point");
  }
  for (double x : points.values) {
    if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("points must lie in [0,1)^d");
  }
}

// Sorted (value, row) pairs for one coordinate of a row subset.
std::vector<std::pair<double, std::int32_t>> column_order(const PointArray& pts, int j,
                                                          const std::vector<std::int32_t>& rows) {
  std::vector<std::pair<double, std::int32_t>> order;
  order.reserve(rows.size());
  for (std::int32_t r : rows) order.emplace_back(pts.at(r, j), r);
  std::sort(order.begin(), order.end());
  return order;
}

struct CornerSearch {
  const PointArray& pts;
  double inv_n;
  int d;
  double best_pos = 0.0;
  double best_neg = 0.0;  // most negative local discrepancy found
  std::vector<double> pos_corner;
  std::vector<double> neg_corner;
  std::vector<double> current;

  explicit CornerSearch(const PointArray& p)
      : pts(p), inv_n(1.0 / static_cast<double>(p.size())), d(p.dim) {
    pos_corner.assign(static_cast<std::size_t>(d), 0.0);
    neg_corner.assign(static_cast<std::size_t>(d), 0.0);
  }

  // Maximizes count/n - volume.  The supremum over corners with a fixed
  // active set sits just above the largest included value per coordinate,
  // so the candidates are the successors of the coordinate values.
  void positive(int j, const std::vector<std::int32_t>& rows, double scale) {
    const auto order = column_order(pts, j, rows);
    std::vector<std::int32_t> prefix;
    prefix.reserve(order.size());
    std::size_t i = 0;
    while (i < order.size()) {
      const double v = order[i].first;
      for (; i < order.size() && order[i].first == v; ++i) prefix.push_back(order[i].second);
      if (v >= kBelowOne) continue;  // successor would leave [0,1)
      const double corner = step_up(v);
      current.push_back(corner);
      if (j + 1 == d) {
        const double delta = static_cast<double>(prefix.size()) * inv_n - scale * corner;
        if (delta > best_pos) {
          best_pos = delta;
          pos_corner = current;
        }
      } else {
        positive(j + 1, prefix, scale * corner);
      }
      current.pop_back();
    }
  }

  // Minimizes count/n - volume.  With a fixed active set the infimum is
  // attained at the next coordinate value (or just below 1), where the box
  // is largest while the strict count is unchanged.
  void negative(int j, const std::vector<std::int32_t>& rows, double scale) {
    const auto order = column_order(pts, j, rows);
    std::vector<std::int32_t> prefix;
    prefix.reserve(order.size());
    std::size_t i = 0;
    bool more = true;
    while (more) {
      double corner;
      if (i < order.size()) {
        corner = order[i].first;
        if (corner == 0.0) {  // empty box at corner 0 contributes nothing
          for (; i < order.size() && order[i].first == 0.0; ++i) prefix.push_back(order[i].second);
          continue;
        }
      } else {
        corner = kBelowOne;
        more = false;
        if (!order.empty() && order.back().first >= kBelowOne) break;  // already visited
      }
      current.push_back(corner);
      if (j + 1 == d) {
        const double delta = static_cast<double>(prefix.size()) * inv_n - scale * corner;
        if (delta < best_neg) {
          best_neg = delta;
          neg_corner = current;
        }
      } else {
        negative(j + 1, prefix, scale * corner);
      }
      current.pop_back();
      const double v = corner;
      for (; i < order.size() && order[i].first == v; ++i) prefix.push_back(order[i].second);
    }
  }
};

// Elementary-interval cell of x at level k; exact because scaling by 2^k
// and flooring do not round for k within the digit width.
std::int64_t dyadic_cell(double x, int k) {
  return static_cast<std::int64_t>(std::ldexp(x, k));
}

// Visits shape vectors with |k| = q, first coordinate descending; the
// callback returns false to stop early.
template <typename Fn>
bool for_each_shape(std::vector<int>& shape, int j, int remaining, Fn&& fn) {
  if (j + 1 == static_cast<int>(shape.size())) {
    shape[j] = remaining;
    return fn(shape);
  }
  for (int k = remaining; k >= 0; --k) {
    shape[j] = k;
    if (!for_each_shape(shape, j + 1, remaining - k, fn)) return false;
  }
  return true;
}

// Checks that every elementary interval with |k| = q holds 2^{m-q} points.
bool level_balanced(const PointArray& points, int m, int q, NetCheckResult* failure) {
  const std::int64_t n = points.size();
  const std::int64_t expected = std::int64_t{1} << (m - q);
  const int d = points.dim;
  std::vector<int> shape(static_cast<std::size_t>(d));
  std::vector<std::int64_t> buckets(std::size_t{1} << q);
  return for_each_shape(shape, 0, q, [&](const std::vector<int>& k) {
    std::fill(buckets.begin(), buckets.end(), 0);
    for (std::int64_t i = 0; i < n; ++i) {
      std::int64_t code = 0;
      for (int j = 0; j < d; ++j) code = (code << k[j]) | dyadic_cell(points.at(i, j), k[j]);
      ++buckets[static_cast<std::size_t>(code)];
    }
    for (std::size_t c = 0; c < buckets.size(); ++c) {
      if (buckets[c] == expected) continue;
      if (failure != nullptr) {
        failure->pass = false;
        failure->expected = expected;
        failure->actual = buckets[c];
        failure->witness.levels = k;
        failure->witness.cells.assign(static_cast<std::size_t>(d), 0);
        std::int64_t code = static_cast<std::int64_t>(c);
        for (int j = d - 1; j >= 0; --j) {
          failure->witness.cells[static_cast<std::size_t>(j)] = code & ((std::int64_t{1} << k[j]) - 1);
          code >>= k[j];
        }
      }
      return false;
    }
    return true;
  });
}

}  // namespace

int ElementaryInterval::total_level() const {
  int q = 0;
  for (int k : levels) q += k;
  return q;
}

double ElementaryInterval::volume() const { return std::ldexp(1.0, -total_level()); }

double ElementaryInterval::lower(int j) const {
  return std::ldexp(static_cast<double>(cells[static_cast<std::size_t>(j)]),
                    -levels[static_cast<std::size_t>(j)]);
}

double ElementaryInterval::upper(int j) const {
  return std::ldexp(static_cast<double>(cells[static_cast<std::size_t>(j)] + 1),
                    -levels[static_cast<std::size_t>(j)]);
}

double local_discrepancy(const PointArray& points, std::span<const double> corner) {
  validate_unit_points(points);
  if (static_cast<int>(corner.size()) != points.dim) {
    throw std::invalid_argument("corner dimension mismatch");
  }
  double volume = 1.0;
  for (double a : corner) {
    if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("corner outside [0,1)^d");
    volume *= a;
  }
  const std::int64_t n = points.size();
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    bool inside = true;
    for (int j = 0; j < points.dim && inside; ++j) inside = points.at(i, j) < corner[j];
    count += inside ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(n) - volume;
}

DiscrepancyReport star_discrepancy_exact(const PointArray& points) {
  validate_unit_points(points);
  if (points.dim > 3 || points.size() > 4096) {
    throw CapabilityError("exact star discrepancy supports d <= 3 and n <= 4096");
  }
  CornerSearch search(points);
  std::vector<std::int32_t> all(static_cast<std::size_t>(points.size()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int32_t>(i);
  search.positive(0, all, 1.0);
  search.negative(0, all, 1.0);

  DiscrepancyReport report;
  report.n = points.size();
  report.dim = points.dim;
  if (search.best_pos >= -search.best_neg) {
    report.value = search.best_pos;
    report.corner = std::move(search.pos_corner);
  } else {
    report.value = -search.best_neg;
    report.corner = std::move(search.neg_corner);
  }
  return report;
}

NetCheckResult verify_net(const PointArray& points, const NetParams& params) {
  validate_unit_points(points);
  if (params.d != points.dim) throw std::invalid_argument("dimension mismatch");
  if (params.t < 0 || params.m < 0 || params.t > params.m) {
    throw std::invalid_argument("need 0 <= t <= m");
  }
  if (points.size() != (std::int64_t{1} << params.m)) {
    throw std::invalid_argument("point count must equal 2^m");
  }
  NetCheckResult result;
  level_balanced(points, params.m, params.m - params.t, &result);
  return result;
}

int min_t(const PointArray& points, int m, int d) {
  validate_unit_points(points);
  if (d != points.dim) throw std::invalid_argument("dimension mismatch");
  if (m < 0 || points.size() != (std::int64_t{1} << m)) {
    throw std::invalid_argument("point count must equal 2^m");
  }
  // Balance at |k| = q implies balance at every coarser level, so the
  // smallest passing t is found by scanning the binding level alone.
  for (int t = 0; t < m; ++t) {
    if (level_balanced(points, m, m - t, nullptr)) return t;
  }
  return m;
}

bool verify_stratified(const PointArray& points) {
  validate_unit_points(points);
  const std::int64_t n = points.size();
  std::vector<char> seen(static_cast<std::size_t>(n));
  for (int j = 0; j < points.dim; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::int64_t i = 0; i < n; ++i) {
      auto cell = static_cast<std::int64_t>(points.at(i, j) * static_cast<double>(n));
      if (cell >= n) cell = n - 1;
      if (seen[static_cast<std::size_t>(cell)] != 0) return false;
      seen[static_cast<std::size_t>(cell)] = 1;
    }
  }
  return true;
}

IntervalCount count_in_interval(std::span<const double> values, double a, double b) {
  if (!(0.0 <= a && a < b && b <= 1.0)) {
    throw std::invalid_argument("need 0 <= a < b <= 1");
  }
  PointArray column;
  column.dim = 1;
  column.values.assign(values.begin(), values.end());
  if (!verify_stratified(column)) {
    throw std::invalid_argument("values are not stratified; the interval bound does not apply");
  }

  IntervalCount result;
  for (double v : values) {
    if (a <= v && v < b) ++result.count;
  }
  const double target = static_cast<double>(values.size()) * (b - a);
  const double snapped = std::round(target);
  if (std::abs(target - snapped) < 1e-9) {
    result.lower_bound = static_cast<std::int64_t>(snapped) - 2;
    result.upper_bound = static_cast<std::int64_t>(snapped) + 2;
  } else {
    result.lower_bound = static_cast<std::int64_t>(std::ceil(target)) - 2;
    result.upper_bound = static_cast<std::int64_t>(std::floor(target)) + 2;
  }
  result.within_bounds = result.lower_bound <= result.count && result.count <= result.upper_bound;
  return result;
}

}  // namespace rqmcmix
