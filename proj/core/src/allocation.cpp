#include "rqmcmix/allocation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rqmcmix/errors.hpp"

namespace rqmcmix {

namespace {

void validate_alpha(std::span<const double> alpha) {
  if (alpha.empty()) throw std::invalid_argument("need at least one stratum");
  double sum = 0.0;
  for (double a : alpha) {
    if (!(a > 0.0)) throw std::invalid_argument("mixture weights must be positive");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights must sum to 1");
  }
}

void validate_rule(const AllocationRule& rule, std::size_t L) {
  if (rule.ansatz != 0 && rule.ansatz != 1) throw std::invalid_argument("ansatz must be 0 or 1");
  if (!(rule.rho >= 1.0)) throw std::invalid_argument("rate rho must be >= 1");
  if (!rule.rho_per_stratum.empty()) {
    if (rule.rho_per_stratum.size() != L) {
      throw std::invalid_argument("per-stratum rates must match the stratum count");
    }
    for (double r : rule.rho_per_stratum) {
      if (!(r >= 1.0)) throw std::invalid_argument("rate rho must be >= 1");
    }
  }
  if (!rule.tau.empty()) {
    if (rule.tau.size() != L) throw std::invalid_argument("tau length must match strata");
    double sum = 0.0;
    for (double t : rule.tau) {
      if (!(t >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
      sum += t;
    }
    if (sum == 0.0) throw std::invalid_argument("tau must not be all zero");
  }
  if (!rule.cost.empty()) {
    if (rule.cost.size() != L) throw std::invalid_argument("cost length must match strata");
    for (double c : rule.cost) {
      if (!(c > 0.0)) throw std::invalid_argument("costs must be positive");
    }
  }
}

std::vector<int> descending_beta_order(const std::vector<double>& beta) {
  std::vector<int> order(beta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return beta[static_cast<std::size_t>(a)] >
                                              beta[static_cast<std::size_t>(b)]; });
  return order;
}

void finish_plan(AllocationPlan& plan, std::span<const double> alpha, std::int64_t n) {
  const std::size_t L = alpha.size();
  plan.total = n;
  plan.beta.resize(L);
  plan.omega.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    plan.beta[l] = static_cast<double>(plan.counts[l]) / static_cast<double>(n);
    plan.omega[l] = alpha[l] / plan.beta[l];
  }
  plan.order = descending_beta_order(plan.beta);
}

double criterion(int ansatz, std::span<const std::int64_t> counts, std::span<const double> tau,
                 std::span<const double> alpha, double rho) {
  double sum = 0.0;
  for (std::size_t l = 0; l < counts.size(); ++l) {
    const double nl = static_cast<double>(counts[l]);
    if (ansatz == 0) {
      sum += alpha[l] * alpha[l] * tau[l] * std::pow(nl, -rho);
    } else {
      sum += alpha[l] * std::sqrt(tau[l]) * std::pow(nl, -rho / 2.0);
    }
  }
  return sum;
}

// All compositions of N into L positive parts, lexicographic from the
// largest leading entry downward.
void compositions(int N, int L, std::vector<std::int64_t>& parts,
                  std::vector<std::vector<std::int64_t>>& out) {
  const int pos = static_cast<int>(parts.size());
  if (pos + 1 == L) {
    parts.push_back(N);
    out.push_back(parts);
    parts.pop_back();
    return;
  }
  for (int v = N - (L - pos - 1); v >= 1; --v) {
    parts.push_back(v);
    compositions(N - v, L, parts, out);
    parts.pop_back();
  }
}

}  // namespace

std::vector<double> ideal_fractions(std::span<const double> alpha, const AllocationRule& rule) {
  validate_alpha(alpha);
  validate_rule(rule, alpha.size());
  const std::size_t L = alpha.size();
  std::vector<double> xi(L);
  double sum = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    double w = alpha[l];
    if (!rule.tau.empty()) {
      const double c = rule.cost.empty() ? 1.0 : rule.cost[l];
      w *= std::sqrt(rule.tau[l] / c);
    } else if (!rule.cost.empty()) {
      w *= std::sqrt(1.0 / rule.cost[l]);
    }
    const double rho = rule.rho_per_stratum.empty() ? rule.rho : rule.rho_per_stratum[l];
    const double exponent =
        std::isinf(rho) ? 0.0 : 2.0 / (rho + (rule.ansatz == 0 ? 1.0 : 2.0));
    xi[l] = std::pow(w, exponent);
    sum += xi[l];
  }
  for (double& x : xi) x /= sum;
  return xi;
}

AllocationPlan integer_allocation(std::span<const double> alpha, const AllocationRule& rule,
                                  std::int64_t n) {
  const auto L = static_cast<std::int64_t>(alpha.size());
  const std::vector<double> xi = ideal_fractions(alpha, rule);
  if (n < L) {
    throw InfeasibleError("need n >= L to give every stratum a sample (n = " +
                          std::to_string(n) + ", L = " + std::to_string(L) + ")");
  }

  AllocationPlan plan;
  plan.counts.resize(static_cast<std::size_t>(L));
  std::vector<double> remainder(static_cast<std::size_t>(L));
  std::int64_t assigned = 0;
  for (std::int64_t l = 0; l < L; ++l) {
    const double raw = static_cast<double>(n) * xi[static_cast<std::size_t>(l)];
    const auto base = static_cast<std::int64_t>(std::floor(raw));
    plan.counts[static_cast<std::size_t>(l)] = base;
    remainder[static_cast<std::size_t>(l)] = raw - static_cast<double>(base);
    assigned += base;
  }
  std::vector<int> by_remainder(static_cast<std::size_t>(L));
  std::iota(by_remainder.begin(), by_remainder.end(), 0);
  std::stable_sort(by_remainder.begin(), by_remainder.end(), [&](int a, int b) {
    return remainder[static_cast<std::size_t>(a)] > remainder[static_cast<std::size_t>(b)];
  });
  for (std::int64_t i = 0; i < n - assigned; ++i) {
    ++plan.counts[static_cast<std::size_t>(by_remainder[static_cast<std::size_t>(i)])];
  }
  // Floor at one sample, then settle any overshoot by shaving the largest
  // counts (latest stratum first so a sorted input stays sorted).
  std::int64_t total = n;
  for (auto& c : plan.counts) {
    if (c == 0) {
      c = 1;
      ++total;
    }
  }
  while (total > n) {
    std::int64_t best = -1;
    for (std::int64_t l = 0; l < L; ++l) {
      if (plan.counts[static_cast<std::size_t>(l)] > 1 &&
          (best < 0 || plan.counts[static_cast<std::size_t>(l)] >=
                           plan.counts[static_cast<std::size_t>(best)])) {
        best = l;
      }
    }
    --plan.counts[static_cast<std::size_t>(best)];
    --total;
  }

  finish_plan(plan, alpha, n);
  return plan;
}

AllocationPlan forward_power_of_two(std::span<const double> alpha, const AllocationRule& rule,
                                    std::int64_t n) {
  const auto L = static_cast<std::int64_t>(alpha.size());
  const std::vector<double> xi = ideal_fractions(alpha, rule);
  if (n < L || !std::has_single_bit(static_cast<std::uint64_t>(n))) {
    throw InfeasibleError("budget must be a power of two with n >= L (n = " +
                          std::to_string(n) + ", L = " + std::to_string(L) + ")");
  }
  const int m = std::countr_zero(static_cast<std::uint64_t>(n));

  std::vector<int> exponents(static_cast<std::size_t>(L), 0);
  std::int64_t used = L;
  while (used < n) {
    const std::int64_t budget = n - used;
    std::int64_t best = -1;
    double best_ratio = -1.0;
    for (std::int64_t l = 0; l < L; ++l) {
      const std::int64_t size = std::int64_t{1} << exponents[static_cast<std::size_t>(l)];
      if (size > budget) continue;
      const double ratio = xi[static_cast<std::size_t>(l)] / static_cast<double>(size);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = l;
      }
    }
    if (best < 0) throw NumericError("no stratum fits the remaining budget");
    used += std::int64_t{1} << exponents[static_cast<std::size_t>(best)];
    ++exponents[static_cast<std::size_t>(best)];
  }

  AllocationPlan plan;
  plan.power_of_two = true;
  plan.counts.resize(static_cast<std::size_t>(L));
  plan.kappa.resize(static_cast<std::size_t>(L));
  for (std::int64_t l = 0; l < L; ++l) {
    plan.counts[static_cast<std::size_t>(l)] = std::int64_t{1}
                                               << exponents[static_cast<std::size_t>(l)];
    plan.kappa[static_cast<std::size_t>(l)] = m - exponents[static_cast<std::size_t>(l)];
  }
  finish_plan(plan, alpha, n);
  return plan;
}

double inefficiency_i0(double gamma, double rho, std::span<const double> alpha) {
  validate_alpha(alpha);
  if (!(gamma >= 1.0) || !(rho >= 1.0) || std::isinf(gamma) || std::isinf(rho)) {
    throw std::invalid_argument("rates must be finite and >= 1");
  }
  double lead = 0.0;
  double sum_gamma = 0.0;
  double sum_rho = 0.0;
  for (double a : alpha) {
    lead += std::pow(a, 2.0 - 2.0 * rho / (gamma + 1.0));
    sum_gamma += std::pow(a, 2.0 / (gamma + 1.0));
    sum_rho += std::pow(a, 2.0 / (rho + 1.0));
  }
  return lead * std::pow(sum_gamma, rho) / std::pow(sum_rho, rho + 1.0);
}

double inefficiency_i1(double gamma, double rho, std::span<const double> alpha) {
  validate_alpha(alpha);
  if (!(gamma >= 1.0) || !(rho >= 1.0) || std::isinf(gamma) || std::isinf(rho)) {
    throw std::invalid_argument("rates must be finite and >= 1");
  }
  double lead = 0.0;
  double sum_gamma = 0.0;
  double sum_rho = 0.0;
  for (double a : alpha) {
    lead += std::pow(a, 1.0 - rho / (gamma + 2.0));
    sum_gamma += std::pow(a, 2.0 / (gamma + 2.0));
    sum_rho += std::pow(a, 2.0 / (rho + 2.0));
  }
  return lead * lead * std::pow(sum_gamma, rho) / std::pow(sum_rho, rho + 2.0);
}

MinimaxGamma minimax_gamma(std::span<const double> alpha, double gamma_lo, double gamma_hi,
                           double rho_lo, double rho_hi, double step) {
  validate_alpha(alpha);
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(1.0 <= gamma_lo && gamma_lo <= gamma_hi && gamma_hi <= 3.0) ||
      !(1.0 <= rho_lo && rho_lo <= rho_hi && rho_hi <= 3.0)) {
    throw std::invalid_argument("rate ranges must satisfy 1 <= lo <= hi <= 3");
  }
  const auto grid = [step](double lo, double hi) {
    std::vector<double> values;
    const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::int64_t i = 0; i <= count; ++i) values.push_back(lo + static_cast<double>(i) * step);
    if (values.back() < hi - 1e-12) values.push_back(hi);
    return values;
  };

  MinimaxGamma result;
  result.worst_inefficiency = std::numeric_limits<double>::infinity();
  for (double gamma : grid(gamma_lo, gamma_hi)) {
    double worst = 0.0;
    for (double rho : grid(rho_lo, rho_hi)) {
      worst = std::max(worst, inefficiency_i0(gamma, rho, alpha));
    }
    if (worst < result.worst_inefficiency) {
      result.worst_inefficiency = worst;
      result.gamma0 = gamma;
    }
  }
  return result;
}

PartitionCatalogue enumerate_partitions(int L) {
  if (L < 2 || L > 24) throw CapabilityError("partition enumeration supports 2 <= L <= 24");
  PartitionCatalogue catalogue;
  catalogue.L = L;
  // Exact dyadic arithmetic: masses in units of 2^-(L-1); exponents are
  // non-decreasing so fractions come out non-increasing.
  const std::int64_t unit_total = std::int64_t{1} << (L - 1);
  std::vector<int> kappa;
  kappa.reserve(static_cast<std::size_t>(L));
  const auto dfs = [&](auto&& self, int lo, std::int64_t remaining) -> void {
    const int slots = L - static_cast<int>(kappa.size());
    if (slots == 0) {
      if (remaining == 0) catalogue.kappas.push_back(kappa);
      return;
    }
    for (int k = lo; k <= L - 1; ++k) {
      const std::int64_t mass = std::int64_t{1} << (L - 1 - k);
      // Later exponents are >= k, so no slot can carry more than this mass.
      if (remaining > mass * static_cast<std::int64_t>(slots)) break;
      if (mass > remaining) continue;
      kappa.push_back(k);
      self(self, k, remaining - mass);
      kappa.pop_back();
    }
  };
  dfs(dfs, 1, unit_total);
  return catalogue;
}

std::vector<std::int64_t> minimax_allocation(std::int64_t N, int L) {
  if (L < 1 || N < L) throw InfeasibleError("need N >= L >= 1");
  const std::int64_t q = N / L;
  const std::int64_t r = N - static_cast<std::int64_t>(L) * q;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(L), q);
  for (std::int64_t l = 0; l < r; ++l) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

AllocationPlan minimax_allocation_pow2(std::int64_t n, int L) {
  if (L < 1) throw InfeasibleError("need at least one stratum");
  int r = 0;
  while ((std::int64_t{1} << r) < L) ++r;
  if (n < (std::int64_t{1} << r) || !std::has_single_bit(static_cast<std::uint64_t>(n))) {
    throw InfeasibleError("budget must be a power of two with n >= 2^ceil(log2 L)");
  }
  const int m = std::countr_zero(static_cast<std::uint64_t>(n));
  const int wide = (std::int64_t{1} << r) - L;  // strata given fraction 2^{1-r}

  AllocationPlan plan;
  plan.power_of_two = true;
  plan.counts.resize(static_cast<std::size_t>(L));
  plan.kappa.resize(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    plan.kappa[static_cast<std::size_t>(l)] = (l < wide) ? r - 1 : r;
    plan.counts[static_cast<std::size_t>(l)] =
        std::int64_t{1} << (m - plan.kappa[static_cast<std::size_t>(l)]);
  }
  plan.total = n;
  plan.beta.resize(static_cast<std::size_t>(L));
  plan.omega.assign(static_cast<std::size_t>(L), 1.0);
  for (int l = 0; l < L; ++l) {
    plan.beta[static_cast<std::size_t>(l)] =
        std::ldexp(1.0, -plan.kappa[static_cast<std::size_t>(l)]);
  }
  plan.order = descending_beta_order(plan.beta);
  return plan;
}

double suboptimality_ratio(int ansatz, std::span<const std::int64_t> n,
                           std::span<const std::int64_t> n_tilde, std::span<const double> tau,
                           std::span<const double> alpha, double rho) {
  if (ansatz != 0 && ansatz != 1) throw std::invalid_argument("ansatz must be 0 or 1");
  if (n.size() != n_tilde.size() || n.size() != tau.size() || n.size() != alpha.size()) {
    throw std::invalid_argument("length mismatch");
  }
  if (!(rho >= 1.0)) throw std::invalid_argument("rate rho must be >= 1");
  double tau_sum = 0.0;
  for (double t : tau) {
    if (!(t >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
    tau_sum += t;
  }
  if (tau_sum == 0.0) throw std::invalid_argument("tau must not be all zero");
  for (std::size_t l = 0; l < n.size(); ++l) {
    if (n[l] < 1 || n_tilde[l] < 1) throw std::invalid_argument("counts must be positive");
  }
  return criterion(ansatz, n, tau, alpha, rho) / criterion(ansatz, n_tilde, tau, alpha, rho);
}

std::vector<std::int64_t> brute_force_minimax(int N, int L, double rho, int ansatz) {
  if (N > 14 || L > 4) throw CapabilityError("exhaustive minimax supports N <= 14, L <= 4");
  if (L < 1 || N < L) throw InfeasibleError("need N >= L >= 1");
  if (ansatz != 0 && ansatz != 1) throw std::invalid_argument("ansatz must be 0 or 1");
  if (!(rho >= 1.0)) throw std::invalid_argument("rate rho must be >= 1");

  std::vector<std::vector<std::int64_t>> candidates;
  std::vector<std::int64_t> scratch;
  compositions(N, L, scratch, candidates);

  const std::vector<double> alpha(static_cast<std::size_t>(L), 1.0 / static_cast<double>(L));
  std::vector<double> tau(static_cast<std::size_t>(L), 0.0);

  double best_worst = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> best;
  for (const auto& n : candidates) {
    double worst = 0.0;
    for (const auto& n_tilde : candidates) {
      for (int l = 0; l < L; ++l) {
        tau.assign(static_cast<std::size_t>(L), 0.0);
        tau[static_cast<std::size_t>(l)] = 1.0;
        worst = std::max(worst, suboptimality_ratio(ansatz, n, n_tilde, tau, alpha, rho));
      }
    }
    if (worst < best_worst) {
      best_worst = worst;
      best = n;
    }
  }
  return best;
}

}  // namespace rqmcmix
