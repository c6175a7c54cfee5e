#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rqmcmix {

/// Row-major n-by-d matrix of points in [0,1).
struct PointArray {
  std::vector<double> values;
  int dim = 0;

  PointArray() = default;
  PointArray(std::size_t n, int d) : values(n * static_cast<std::size_t>(d)), dim(d) {}

  std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
  double at(std::size_t i, int j) const { return values[i * dim + j]; }
  double& at(std::size_t i, int j) { return values[i * dim + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dim, static_cast<std::size_t>(dim)};
  }
};

}  // namespace rqmcmix
