#pragma once

#include <cstdint>
#include <vector>

#include "rqmcmix/directions.hpp"
#include "rqmcmix/point_array.hpp"

namespace rqmcmix {

enum class ScrambleKind {
  none,            // keep the raw net
  nested_uniform,  // independent digit permutations on every dyadic branch
  linear_shift,    // random lower-triangular matrix plus digital shift
};

/// A base-2 digital point set held in digit form: one word per coordinate,
/// digit k at bit (kDigitWidth - k), so word * 2^-kDigitWidth is the value.
struct DigitalPointSet {
  std::vector<std::uint64_t> words;  // row-major, point-major layout
  int dim = 0;
  int m = 0;  // log2 of the point count
  ScrambleKind scramble_kind = ScrambleKind::none;
  std::uint64_t scramble_seed = 0;

  std::int64_t size() const { return std::int64_t{1} << m; }
  std::uint64_t word(std::int64_t point, int coordinate) const {
    return words[static_cast<std::size_t>(point) * dim + coordinate];
  }
};

/// First 2^m Sobol' points in `dim` dimensions, in natural index order.
/// Natural order keeps every 2^k prefix of the sequence a digital net.
DigitalPointSet sobol_points(const DirectionNumbers& directions, int dim, int m);

/// Applies an independent randomization per coordinate, derived from `seed`.
/// The base points are not modified.  `none` returns a copy.
DigitalPointSet scramble(const DigitalPointSet& base, ScrambleKind kind, std::uint64_t seed);

/// Converts digit words to doubles in [0, 1).  Exact: no rounding occurs.
PointArray to_unit_cube(const DigitalPointSet& points);

namespace detail {
/// Scrambles a single coordinate word under the nested-uniform scheme.
/// Exposed for tests that pin the branch-keying layout.
std::uint64_t nested_uniform_word(std::uint64_t word, std::uint64_t dim_key);
}  // namespace detail

}  // namespace rqmcmix
