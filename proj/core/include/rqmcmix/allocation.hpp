#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rqmcmix {

/// How to turn mixture weights into sampling fractions.  The variance in
/// stratum l is modeled as tau_l n_l^-rho; ansatz 0 treats the per-stratum
/// errors as uncorrelated, ansatz 1 as perfectly correlated.
struct AllocationRule {
  int ansatz = 0;
  double rho = 1.0;                      // >= 1; may be infinity
  std::vector<double> rho_per_stratum;   // optional override, one rate per stratum
  std::vector<double> tau;               // optional variance weights, >= 0, not all 0
  std::vector<double> cost;              // optional sampling costs, > 0
  bool power_of_two = false;
};

struct AllocationPlan {
  std::vector<double> beta;            // sampling fractions, sum to 1
  std::vector<std::int64_t> counts;    // n_l >= 1, sum to n
  std::vector<double> omega;           // alpha_l / beta_l
  std::vector<int> kappa;              // beta_l = 2^-kappa_l; power-of-two plans only
  std::vector<int> order;              // stratum indices sorted by non-increasing beta
  bool power_of_two = false;
  std::int64_t total = 0;
};

struct PartitionCatalogue {
  int L = 0;
  std::vector<std::vector<int>> kappas;  // each non-decreasing, sum 2^-k = 1
};

struct MinimaxGamma {
  double gamma0 = 0.0;
  double worst_inefficiency = 0.0;
};

/// Fractions xi_l proportional to w_l^{2/(rho+1)} (ansatz 0) or
/// w_l^{2/(rho+2)} (ansatz 1), where w_l = alpha_l sqrt(tau_l / cost_l)
/// when weights are supplied.  rho = infinity gives equal fractions.
std::vector<double> ideal_fractions(std::span<const double> alpha, const AllocationRule& rule);

/// Largest-remainder rounding of n * xi_l with a floor of one sample per
/// stratum; overshoot from the floor is taken back from the largest counts.
AllocationPlan integer_allocation(std::span<const double> alpha, const AllocationRule& rule,
                                  std::int64_t n);

/// Forward doubling: start all strata at one point and repeatedly double
/// the affordable stratum with the largest xi_l / 2^{m_l}, lowest index on
/// ties, until the power-of-two budget n is spent.
AllocationPlan forward_power_of_two(std::span<const double> alpha, const AllocationRule& rule,
                                    std::int64_t n);

/// Relative mean-squared-error penalty for designing the allocation with
/// rate gamma when the true rate is rho, under the uncorrelated criterion.
/// Always >= 1 with equality at gamma = rho.
double inefficiency_i0(double gamma, double rho, std::span<const double> alpha);

/// Same penalty under the perfectly-correlated criterion.
double inefficiency_i1(double gamma, double rho, std::span<const double> alpha);

/// Grid search for the design rate minimizing the worst case over rho of
/// inefficiency_i0.  Scans interior rho values, not just the endpoints.
MinimaxGamma minimax_gamma(std::span<const double> alpha, double gamma_lo, double gamma_hi,
                           double rho_lo, double rho_hi, double step);

/// All ways to split 1 into L non-increasing negative powers of two,
/// reported as exponent vectors in ascending lexicographic order.
PartitionCatalogue enumerate_partitions(int L);

/// Near-equal integer split: N - L*floor(N/L) strata get floor(N/L) + 1.
std::vector<std::int64_t> minimax_allocation(std::int64_t N, int L);

/// Near-equal power-of-two split: with r = ceil(log2 L), 2^r - L strata
/// take fraction 2^{1-r} and the rest 2^{-r}.
AllocationPlan minimax_allocation_pow2(std::int64_t n, int L);

/// Criterion ratio R_a(n | n_tilde; tau): the error criterion of ansatz a
/// under counts n divided by the same criterion under counts n_tilde.
double suboptimality_ratio(int ansatz, std::span<const std::int64_t> n,
                           std::span<const std::int64_t> n_tilde, std::span<const double> tau,
                           std::span<const double> alpha, double rho);

/// Exhaustive minimax over all positive compositions of N into L parts,
/// with the adversary choosing both the comparison counts and a
/// single-stratum tau.  Small N and L only; this is the oracle that the
/// near-equal formulas are checked against.
std::vector<std::int64_t> brute_force_minimax(int N, int L, double rho, int ansatz);

}  // namespace rqmcmix
