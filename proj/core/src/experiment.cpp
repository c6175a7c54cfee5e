#include "rqmcmix/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>

#include "rqmcmix/allocation.hpp"
#include "rqmcmix/errors.hpp"
#include "rqmcmix/estimators.hpp"
#include "rqmcmix/seeds.hpp"

namespace rqmcmix {

namespace {

constexpr EstimatorId kAllEstimators[] = {EstimatorId::mc, EstimatorId::rqmc,
                                          EstimatorId::rqmc_adj, EstimatorId::rqmc_pow2,
                                          EstimatorId::rqmc_strat};

void append_number(std::string& line, double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  line.append(buf, res.ptr);
}

void append_number(std::string& line, std::int64_t value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  line.append(buf, res.ptr);
}

}  // namespace

std::string estimator_name(EstimatorId id) {
  switch (id) {
    case EstimatorId::mc: return "mc";
    case EstimatorId::rqmc: return "rqmc";
    case EstimatorId::rqmc_adj: return "rqmc_adj";
    case EstimatorId::rqmc_pow2: return "rqmc_pow2";
    case EstimatorId::rqmc_strat: return "rqmc_strat";
  }
  throw std::invalid_argument("unknown estimator id");
}

EstimatorId parse_estimator(const std::string& name) {
  for (EstimatorId id : kAllEstimators) {
    if (name == estimator_name(id)) return id;
  }
  throw std::invalid_argument("unknown estimator \"" + name +
                              "\"; expected mc, rqmc, rqmc_adj, rqmc_pow2, or rqmc_strat");
}

std::vector<EstimatorId> parse_estimator_list(const std::string& names) {
  std::set<int> seen;
  std::size_t start = 0;
  while (start <= names.size()) {
    std::size_t end = names.find(',', start);
    if (end == std::string::npos) end = names.size();
    std::string token = names.substr(start, end - start);
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    if (token.empty()) throw std::invalid_argument("empty estimator name in list");
    if (token == "all") {
      for (EstimatorId id : kAllEstimators) seen.insert(static_cast<int>(id));
    } else {
      seen.insert(static_cast<int>(parse_estimator(token)));
    }
    start = end + 1;
  }
  std::vector<EstimatorId> out;
  for (int id : seen) out.push_back(static_cast<EstimatorId>(id));
  return out;
}

void ExperimentGrid::validate() const {
  if (m_min < 0 || m_max < m_min) throw std::invalid_argument("need 0 <= m-min <= m-max");
  if (m_max > 40) throw std::invalid_argument("m-max above 40 is not supported");
  if (replicates < 2) throw std::invalid_argument("need at least 2 replicates");
  if (rho && !(*rho >= 1.0)) throw std::invalid_argument("rho must be >= 1 (infinity allowed)");
  if (ansatz != 0 && ansatz != 1) throw std::invalid_argument("ansatz must be 0 or 1");
  if (threads < 1) throw std::invalid_argument("need at least one thread");
}

double default_rho(const std::string& model_name, EstimatorId id) {
  if (model_name == "toy" &&
      (id == EstimatorId::rqmc_pow2 || id == EstimatorId::rqmc_strat)) {
    return 3.0;
  }
  return 2.0;
}

std::vector<ExperimentRow> run_experiment(const Model& model, const ExperimentGrid& grid,
                                          const DirectionNumbers& dirs) {
  grid.validate();
  model.spec.validate();

  std::vector<EstimatorId> ids = grid.estimators;
  if (ids.empty()) ids.assign(std::begin(kAllEstimators), std::end(kAllEstimators));
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  const MixtureSpec& spec = model.spec;
  const Integrand& g = model.integrand;
  std::vector<ExperimentRow> rows;

  for (EstimatorId id : ids) {
    AllocationRule rule;
    rule.ansatz = grid.ansatz;
    rule.rho = grid.rho.value_or(default_rho(model.name, id));
    rule.power_of_two = (id == EstimatorId::rqmc_pow2 || id == EstimatorId::rqmc_strat);

    const std::uint64_t estimator_seed = split_seed(grid.seed, static_cast<std::uint64_t>(id));
    for (int m = grid.m_min; m <= grid.m_max; ++m) {
      const std::int64_t n = std::int64_t{1} << m;
      const std::uint64_t cell_seed = split_seed(estimator_seed, static_cast<std::uint64_t>(m));

      std::function<EstimateResult(std::uint64_t)> one;
      switch (id) {
        case EstimatorId::mc:
          one = [&, n](std::uint64_t s) { return estimate_mc(spec, g, n, s); };
          break;
        case EstimatorId::rqmc:
          one = [&, m](std::uint64_t s) {
            return estimate_rqmc_plain(spec, g, dirs, m, s, grid.scramble);
          };
          break;
        case EstimatorId::rqmc_adj:
          one = [&, m, rule](std::uint64_t s) {
            return estimate_rqmc_adjusted(spec, g, rule, dirs, m, s, grid.scramble);
          };
          break;
        case EstimatorId::rqmc_pow2:
          one = [&, m, rule](std::uint64_t s) {
            return estimate_rqmc_pow2(spec, g, rule, dirs, m, s, grid.scramble);
          };
          break;
        case EstimatorId::rqmc_strat: {
          const AllocationPlan plan = forward_power_of_two(spec.alpha, rule, n);
          one = [&, counts = plan.counts](std::uint64_t s) {
            return estimate_rqmc_per_stratum(spec, g, counts, dirs, s, grid.scramble);
          };
          break;
        }
      }

      const auto start = std::chrono::steady_clock::now();
      const EstimatorReport report = replicate_variance(estimator_name(id), n, one,
                                                        grid.replicates, cell_seed, grid.threads);
      const auto stop = std::chrono::steady_clock::now();

      ExperimentRow row;
      row.estimator = report.name;
      row.m = m;
      row.n = n;
      row.variance = report.variance;
      row.mean = report.mean;
      row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      rows.push_back(std::move(row));
    }
  }

  std::sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
    return a.estimator != b.estimator ? a.estimator < b.estimator : a.m < b.m;
  });
  return rows;
}

std::vector<SlopeFit> fit_slopes(std::span<const ExperimentRow> rows, int m_lo, int m_hi) {
  std::vector<SlopeFit> fits;
  std::vector<std::string> names;
  for (const auto& row : rows) {
    if (std::find(names.begin(), names.end(), row.estimator) == names.end()) {
      names.push_back(row.estimator);
    }
  }
  std::sort(names.begin(), names.end());

  for (const auto& name : names) {
    std::vector<std::pair<double, double>> points;
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (const auto& row : rows) {
      if (row.estimator != name || row.m < m_lo || row.m > m_hi) continue;
      if (!(row.variance > 0.0)) continue;
      points.emplace_back(static_cast<double>(row.n), row.variance);
      lo = std::min(lo, row.m);
      hi = std::max(hi, row.m);
    }
    if (points.size() < 2) continue;
    fits.push_back({name, lo, hi, fit_log2_slope(points)});
  }
  return fits;
}

void write_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "estimator,m,n,variance,mean,wall_ms\n";
  std::string line;
  for (const auto& row : rows) {
    line.clear();
    line += row.estimator;
    line += ',';
    append_number(line, static_cast<std::int64_t>(row.m));
    line += ',';
    append_number(line, row.n);
    line += ',';
    append_number(line, row.variance);
    line += ',';
    append_number(line, row.mean);
    line += ',';
    append_number(line, row.wall_ms);
    line += '\n';
    out << line;
  }
}

}  // namespace rqmcmix
