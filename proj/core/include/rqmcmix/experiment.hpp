#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rqmcmix/digital_net.hpp"
#include "rqmcmix/directions.hpp"
#include "rqmcmix/models.hpp"

namespace rqmcmix {

/// The five estimators of the variance studies, in canonical CSV order.
enum class EstimatorId : int { mc = 0, rqmc = 1, rqmc_adj = 2, rqmc_pow2 = 3, rqmc_strat = 4 };

std::string estimator_name(EstimatorId id);
EstimatorId parse_estimator(const std::string& name);

/// Comma-separated estimator names; "all" selects the full set.  The
/// result is deduplicated and in canonical order.
std::vector<EstimatorId> parse_estimator_list(const std::string& names);

/// Estimator set x sample-size range x replicate count, plus the knobs
/// shared by every cell.
struct ExperimentGrid {
  std::string model = "toy";
  int m_min = 3;
  int m_max = 12;
  int replicates = 500;
  std::vector<EstimatorId> estimators;  // empty means all five
  std::optional<double> rho;            // overrides the per-model defaults
  int ansatz = 0;
  std::uint64_t seed = 1;
  int threads = 1;
  ScrambleKind scramble = ScrambleKind::nested_uniform;

  void validate() const;
};

struct ExperimentRow {
  std::string estimator;
  int m = 0;
  std::int64_t n = 0;
  double variance = 0.0;
  double mean = 0.0;
  double wall_ms = 0.0;
};

struct SlopeFit {
  std::string estimator;
  int m_lo = 0;
  int m_hi = 0;
  double slope = 0.0;
};

/// Variance-model rate used when the grid does not pin one: 3 for the toy
/// model's power-of-two and per-stratum runs, 2 everywhere else.
double default_rho(const std::string& model_name, EstimatorId id);

/// Runs replicate_variance for every (estimator, m) cell.  Each cell is
/// seeded from (master seed, estimator, m) only, so results do not depend
/// on which other cells are present.  Rows come back sorted by
/// (estimator, m).
std::vector<ExperimentRow> run_experiment(const Model& model, const ExperimentGrid& grid,
                                          const DirectionNumbers& dirs);

/// Least-squares slope of log2(variance) vs log2(n) per estimator over
/// m in [m_lo, m_hi]; estimators with fewer than two cells there are
/// skipped.
std::vector<SlopeFit> fit_slopes(std::span<const ExperimentRow> rows, int m_lo = 7, int m_hi = 12);

/// Header "estimator,m,n,variance,mean,wall_ms", then one row per cell;
/// numbers are shortest round-trip decimal, locale independent.
void write_csv(std::ostream& out, std::span<const ExperimentRow> rows);

}  // namespace rqmcmix
