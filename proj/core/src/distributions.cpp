#include "rqmcmix/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include "rqmcmix/errors.hpp"

namespace rqmcmix {

namespace {

constexpr double kUnitLo = 0x1p-53;
constexpr double kUnitHi = 1.0 - 0x1p-53;

// Gamma density without the scale, exp((a-1) ln x - x - lgamma(a)).
double gamma_density(double shape, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp((shape - 1.0) * std::log(x) - x - std::lgamma(shape));
}

double gamma_p_series(double shape, double x) {
  // P(a,x) = x^a e^-x / Gamma(a) * sum_n x^n / (a (a+1) ... (a+n))
  double term = 1.0 / shape;
  double sum = term;
  for (int n = 1; n < 500; ++n) {
    term *= x / (shape + static_cast<double>(n));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum * std::exp(shape * std::log(x) - x - std::lgamma(shape));
}

double gamma_q_continued_fraction(double shape, double x) {
  // Modified Lentz evaluation of the standard continued fraction for Q(a,x).
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - shape;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - shape);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(shape * std::log(x) - x - std::lgamma(shape));
}

double gamma_quantile_unit_scale(double shape, double u) {
  // Wilson-Hilferty start, falling back to the small-x expansion when the
  // cube goes nonpositive.
  const double g = normal_quantile(u);
  const double t = 1.0 - 1.0 / (9.0 * shape) + g / (3.0 * std::sqrt(shape));
  double x = shape * t * t * t;
  if (!(x > 0.0) || !std::isfinite(x)) {
    x = std::exp((std::log(u) + std::lgamma(shape + 1.0)) / shape);
  }

  // Bracket the root, then take safeguarded Newton steps.
  double lo = 0.0;
  double hi = x;
  while (regularized_gamma_p(shape, hi) < u) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericError("gamma quantile bracket failed");
  }
  if (x <= lo || x >= hi) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    // Same complement trick as the normal quantile: in the upper tail
    // evaluate against Q directly so the residual does not cancel.
    const double f = (u >= 0.5 && x >= shape + 1.0)
                         ? (1.0 - u) - gamma_q_continued_fraction(shape, x)
                         : regularized_gamma_p(shape, x) - u;
    if (f > 0.0) {
      hi = x;
    } else if (f < 0.0) {
      lo = x;
    } else {
      return x;
    }
    const double density = gamma_density(shape, x);
    double next = density > 0.0 ? x - f / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double change = std::abs(next - x);
    x = next;
    if (change <= 1e-12 * x) return x;
  }
  throw NumericError("gamma quantile did not converge");
}

}  // namespace

DistributionSpec DistributionSpec::make_normal(double mean, double sd) {
  DistributionSpec d{DistKind::normal, mean, sd};
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::make_frechet(double shape, double scale) {
  DistributionSpec d{DistKind::frechet, shape, scale};
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::make_gamma(double shape, double scale) {
  DistributionSpec d{DistKind::gamma, shape, scale};
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::make_uniform(double lo, double hi) {
  DistributionSpec d{DistKind::uniform, lo, hi};
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::make_shifted_normal(double theta) {
  DistributionSpec d{DistKind::shifted_normal, theta, 1.0};
  d.validate();
  return d;
}

void DistributionSpec::validate() const {
  switch (kind) {
    case DistKind::normal:
      if (!(b > 0.0)) throw std::invalid_argument("normal sd must be positive");
      break;
    case DistKind::frechet:
    case DistKind::gamma:
      if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument(kind_name(kind) + " shape and scale must be positive");
      }
      break;
    case DistKind::uniform:
      if (!(a < b)) throw std::invalid_argument("uniform needs lo < hi");
      break;
    case DistKind::shifted_normal:
      break;
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("distribution parameters must be finite");
  }
}

std::string kind_name(DistKind kind) {
  switch (kind) {
    case DistKind::normal: return "normal";
    case DistKind::frechet: return "frechet";
    case DistKind::gamma: return "gamma";
    case DistKind::uniform: return "uniform";
    case DistKind::shifted_normal: return "shifted_normal";
  }
  return "unknown";
}

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("normal quantile needs u in (0,1)");

  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (u < p_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - p_low) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against the exact CDF via erfc.  For u >= 1/2 work with
  // the upper tail: 1 - u is exact there, so the residual keeps full
  // precision instead of cancelling against a CDF value near one.
  const double err = u >= 0.5 ? (1.0 - u) - 0.5 * std::erfc(x / std::sqrt(2.0))
                              : 0.5 * std::erfc(-x / std::sqrt(2.0)) - u;
  const double step = err * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
  return x - step / (1.0 + 0.5 * x * step);
}

double regularized_gamma_p(double shape, double x) {
  if (!(shape > 0.0)) throw std::domain_error("gamma shape must be positive");
  if (!(x >= 0.0)) throw std::domain_error("gamma argument must be non-negative");
  if (x == 0.0) return 0.0;
  if (x < shape + 1.0) return gamma_p_series(shape, x);
  return 1.0 - gamma_q_continued_fraction(shape, x);
}

double quantile(const DistributionSpec& dist, double u) {
  dist.validate();
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile needs u in [0,1]");
  u = std::min(std::max(u, kUnitLo), kUnitHi);
  switch (dist.kind) {
    case DistKind::normal:
      return dist.a + dist.b * normal_quantile(u);
    case DistKind::shifted_normal:
      return dist.a + normal_quantile(u);
    case DistKind::frechet:
      return dist.b * std::pow(-std::log(u), -1.0 / dist.a);
    case DistKind::gamma:
      return dist.b * gamma_quantile_unit_scale(dist.a, u);
    case DistKind::uniform:
      return dist.a + u * (dist.b - dist.a);
  }
  throw std::invalid_argument("unknown distribution kind");
}

}  // namespace rqmcmix
