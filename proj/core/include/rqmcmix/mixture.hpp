#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "rqmcmix/distributions.hpp"

namespace rqmcmix {

/// A mixture with one categorical variable: stratum l has probability
/// alpha_l and an independent per-coordinate transform given by quantile
/// functions.  Strata are kept in non-increasing alpha order; original
/// positions from a loaded file are retained for reporting.
struct MixtureSpec {
  std::vector<double> alpha;
  std::vector<std::vector<DistributionSpec>> transforms;  // L x s
  std::vector<int> original_index;                        // sorted pos -> source pos

  int strata() const { return static_cast<int>(alpha.size()); }
  int coords() const { return transforms.empty() ? 0 : static_cast<int>(transforms[0].size()); }
  void validate() const;
};

/// Maps the first point coordinate to a stratum through cumulative bounds
/// B_0 = 0 < B_1 < ... < B_L = 1 over non-increasing fractions.
struct StratumSelector {
  std::vector<double> beta;
  std::vector<double> bounds;  // size L + 1
};

/// Builds the selector.  Fractions must be positive, non-increasing, and
/// sum to 1; dyadic fractions are represented exactly.
StratumSelector build_selector(std::span<const double> beta);

/// The stratum index (0-based) whose interval [B_l, B_{l+1}) contains v;
/// v = 1 maps to the last stratum.
int select_stratum(const StratumSelector& selector, double v);

/// Importance weight alpha_l / beta_l.
double weight(const MixtureSpec& spec, std::span<const double> beta, int l);

/// Applies stratum l's quantile transforms coordinate-wise.
std::vector<double> transform(const MixtureSpec& spec, int l, std::span<const double> u);

/// Reads a mixture from a JSON tree: {"strata": [{"weight": w, "coords":
/// [{"kind": ..., ...}, ...]}, ...]}.  Strata are sorted by descending
/// weight; original file positions land in original_index.
MixtureSpec load_mixture_spec(std::istream& in);

}  // namespace rqmcmix
