#pragma once

#include <string>

namespace rqmcmix {

enum class DistKind { normal, frechet, gamma, uniform, shifted_normal };

/// One marginal distribution, described by its kind and natural parameters.
struct DistributionSpec {
  DistKind kind = DistKind::normal;
  double a = 0.0;  // mean | shape | lo | theta
  double b = 1.0;  // sd | scale | hi   (unused for shifted_normal)

  static DistributionSpec make_normal(double mean, double sd);
  static DistributionSpec make_frechet(double shape, double scale);
  static DistributionSpec make_gamma(double shape, double scale);
  static DistributionSpec make_uniform(double lo, double hi);
  static DistributionSpec make_shifted_normal(double theta);

  void validate() const;  // sd/shape/scale > 0, lo < hi
};

std::string kind_name(DistKind kind);

/// Standard normal inverse CDF.  Rational approximation polished with one
/// Halley step against erfc; absolute error well under 1e-9.
double normal_quantile(double u);

/// Regularized lower incomplete gamma P(shape, x), by series below
/// shape + 1 and continued fraction above.
double regularized_gamma_p(double shape, double x);

/// Inverse CDF of `dist` at u.  u outside [0,1] is a domain error; u is
/// clamped to [2^-53, 1 - 2^-53] first because several quantiles diverge
/// at the endpoints and scrambled points can land on them.
double quantile(const DistributionSpec& dist, double u);

}  // namespace rqmcmix
