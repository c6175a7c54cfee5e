#include "rqmcmix/digital_net.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "rqmcmix/errors.hpp"
#include "rqmcmix/seeds.hpp"

namespace rqmcmix {

namespace {

constexpr int kW = DirectionNumbers::kDigitWidth;
constexpr std::uint64_t kDigitMask = (std::uint64_t{1} << kW) - 1;

// Sub-stream tags for the per-coordinate scramble keys.
constexpr std::uint64_t kTagMatrixRows = 1;
constexpr std::uint64_t kTagDigitalShift = 2;

std::uint64_t linear_shift_word(std::uint64_t word, std::uint64_t dim_key) {
  const std::uint64_t rows_key = split_seed(dim_key, kTagMatrixRows);
  const std::uint64_t shift_key = split_seed(dim_key, kTagDigitalShift);
  std::uint64_t out = 0;
  for (int k = 1; k <= kW; ++k) {
    // Row k: unit diagonal at digit k, random entries against digits 1..k-1.
    // Digits j < k sit at bits above (kW - k), so mask the random word there.
    const std::uint64_t above = kDigitMask & ~((std::uint64_t{2} << (kW - k)) - 1);
    const std::uint64_t row = (std::uint64_t{1} << (kW - k)) | (prf(rows_key, k) & above);
    const std::uint64_t digit = static_cast<std::uint64_t>(std::popcount(row & word) & 1);
    out |= digit << (kW - k);
  }
  return out ^ (prf(shift_key, 0) & kDigitMask);
}

}  // namespace

namespace detail {

std::uint64_t nested_uniform_word(std::uint64_t word, std::uint64_t dim_key) {
  // Digit k is flipped by a bit tied to the dyadic branch holding the point,
  // keyed by the heap index 2^{k-1} + (value of digits 1..k-1).  Points that
  // share a branch share the flip, which is exactly the nested scheme.
  std::uint64_t out = 0;
  std::uint64_t prefix = 0;
  for (int k = 1; k <= kW; ++k) {
    const std::uint64_t node = (std::uint64_t{1} << (k - 1)) + prefix;
    const std::uint64_t digit = (word >> (kW - k)) & 1u;
    const std::uint64_t flip = prf(dim_key, node) & 1u;
    out |= (digit ^ flip) << (kW - k);
    prefix = (prefix << 1) | digit;
  }
  return out;
}

}  // namespace detail

DigitalPointSet sobol_points(const DirectionNumbers& directions, int dim, int m) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  if (m < 0 || m > kW) throw std::invalid_argument("m must be in [0, digit width]");
  if (dim > directions.dimensions()) {
    throw CapabilityError("direction numbers cover " +
                          std::to_string(directions.dimensions()) + " dimensions, " +
                          std::to_string(dim) + " requested");
  }

  DigitalPointSet set;
  set.dim = dim;
  set.m = m;
  const std::int64_t n = set.size();
  set.words.assign(static_cast<std::size_t>(n) * dim, 0);

  for (int j = 0; j < dim; ++j) {
    const auto cols = directions.columns(j + 1);
    // Point i is the XOR of the columns selected by the binary digits of i.
    for (std::int64_t i = 0; i < n; ++i) {
      std::uint64_t w = 0;
      std::uint64_t bits = static_cast<std::uint64_t>(i);
      while (bits != 0) {
        const int b = std::countr_zero(bits);
        w ^= cols[b];
        bits &= bits - 1;
      }
      set.words[static_cast<std::size_t>(i) * dim + j] = w;
    }
  }
  return set;
}

DigitalPointSet scramble(const DigitalPointSet& base, ScrambleKind kind, std::uint64_t seed) {
  if (base.scramble_kind != ScrambleKind::none) {
    throw std::invalid_argument("points are already scrambled");
  }
  DigitalPointSet out = base;
  if (kind == ScrambleKind::none) return out;
  out.scramble_kind = kind;
  out.scramble_seed = seed;

  const std::int64_t n = base.size();
  for (int j = 0; j < base.dim; ++j) {
    const std::uint64_t dim_key = split_seed(seed, static_cast<std::uint64_t>(j));
    for (std::int64_t i = 0; i < n; ++i) {
      std::uint64_t& w = out.words[static_cast<std::size_t>(i) * base.dim + j];
      w = (kind == ScrambleKind::nested_uniform) ? detail::nested_uniform_word(w, dim_key)
                                                 : linear_shift_word(w, dim_key);
    }
  }
  return out;
}

PointArray to_unit_cube(const DigitalPointSet& points) {
  PointArray array;
  array.dim = points.dim;
  array.values.resize(points.words.size());
  for (std::size_t i = 0; i < points.words.size(); ++i) {
    array.values[i] = static_cast<double>(points.words[i]) * 0x1p-53;
  }
  return array;
}

}  // namespace rqmcmix
