// Command-line front end: allocation planning, partition catalogues,
// inefficiency tables, net diagnostics, and the replicate-variance
// experiments.  Data goes to stdout or --out; diagnostics go to stderr.
// Exit codes: 0 success, 2 usage or infeasible input, 3 numeric failure.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rqmcmix/allocation.hpp"
#include "rqmcmix/digital_net.hpp"
#include "rqmcmix/directions.hpp"
#include "rqmcmix/discrepancy.hpp"
#include "rqmcmix/errors.hpp"
#include "rqmcmix/experiment.hpp"
#include "rqmcmix/models.hpp"

namespace {

using namespace rqmcmix;

double parse_number(const std::string& token) {
  const auto slash = token.find('/');
  try {
    if (slash != std::string::npos) {
      const double num = std::stod(token.substr(0, slash));
      const double den = std::stod(token.substr(slash + 1));
      if (den == 0.0) throw std::invalid_argument("zero denominator");
      return num / den;
    }
    return std::stod(token);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number \"" + token + "\"");
  }
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    std::istringstream inner(token);
    std::string word;
    while (inner >> word) out.push_back(parse_number(word));
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

std::vector<double> load_number_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  for (char& c : text) {
    if (c == '\n' || c == '\t') c = ' ';
  }
  return parse_number_list(text);
}

double parse_rate(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") {
    return std::numeric_limits<double>::infinity();
  }
  const double rho = parse_number(text);
  if (!(rho >= 1.0)) throw std::invalid_argument("rho must be >= 1 or inf");
  return rho;
}

/// Writes to --out when given, else to stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string fraction_text(int kappa) { return "1/" + std::to_string(std::int64_t{1} << kappa); }

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

DirectionNumbers load_dirs(const std::string& path) {
  if (path.empty()) return embedded_direction_numbers();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open direction-number file " + path);
  return load_direction_numbers(in);
}

struct AllocateArgs {
  std::string alpha, alpha_file, rho = "2", tau, cost, rho_per_stratum, out;
  std::int64_t n = 0;
  int ansatz = 0;
  bool pow2 = false;
};

int run_allocate(const AllocateArgs& args) {
  if (args.alpha.empty() == args.alpha_file.empty()) {
    throw std::invalid_argument("need exactly one of --alpha and --alpha-file");
  }
  const std::vector<double> alpha =
      args.alpha.empty() ? load_number_file(args.alpha_file) : parse_number_list(args.alpha);

  AllocationRule rule;
  rule.ansatz = args.ansatz;
  rule.rho = parse_rate(args.rho);
  rule.power_of_two = args.pow2;
  if (!args.tau.empty()) rule.tau = parse_number_list(args.tau);
  if (!args.cost.empty()) rule.cost = parse_number_list(args.cost);
  if (!args.rho_per_stratum.empty()) rule.rho_per_stratum = parse_number_list(args.rho_per_stratum);

  const std::vector<double> xi = ideal_fractions(alpha, rule);
  const AllocationPlan plan = args.pow2 ? forward_power_of_two(alpha, rule, args.n)
                                        : integer_allocation(alpha, rule, args.n);

  OutputTarget target(args.out);
  std::ostream& out = target.stream();
  out << "l,alpha,xi,beta,n,omega\n";
  for (std::size_t l = 0; l < alpha.size(); ++l) {
    out << (l + 1) << ',' << format_double(alpha[l]) << ',' << format_double(xi[l]) << ','
        << format_double(plan.beta[l]) << ',' << plan.counts[l] << ','
        << format_double(plan.omega[l]) << '\n';
  }
  return 0;
}

int run_partitions(int L, const std::string& out_path) {
  const PartitionCatalogue catalogue = enumerate_partitions(L);
  OutputTarget target(out_path);
  std::ostream& out = target.stream();
  for (const auto& kappas : catalogue.kappas) {
    for (std::size_t l = 0; l < kappas.size(); ++l) {
      if (l > 0) out << ' ';
      out << fraction_text(kappas[l]);
    }
    out << '\n';
  }
  out << "count " << catalogue.kappas.size() << '\n';
  return 0;
}

struct InefficiencyArgs {
  std::string alpha, alpha_file, out;
  double gamma_min = 1.0, gamma_max = 3.0, rho_min = 1.0, rho_max = 3.0, step = 0.5;
  bool with_i1 = false;
};

int run_inefficiency(const InefficiencyArgs& args) {
  if (args.alpha.empty() == args.alpha_file.empty()) {
    throw std::invalid_argument("need exactly one of --alpha and --alpha-file");
  }
  const std::vector<double> alpha =
      args.alpha.empty() ? load_number_file(args.alpha_file) : parse_number_list(args.alpha);
  if (!(args.step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(1.0 <= args.gamma_min && args.gamma_min <= args.gamma_max && args.gamma_max <= 3.0) ||
      !(1.0 <= args.rho_min && args.rho_min <= args.rho_max && args.rho_max <= 3.0)) {
    throw std::invalid_argument("gamma and rho grids must lie inside [1, 3]");
  }

  const auto grid = [&](double lo, double hi) {
    std::vector<double> values;
    for (int i = 0;; ++i) {
      double v = lo + i * args.step;
      if (v > hi + 1e-9) break;
      if (std::abs(v - std::round(v)) < 1e-9) v = std::round(v);
      values.push_back(v);
    }
    if (values.back() < hi - 1e-9) values.push_back(hi);
    return values;
  };
  const std::vector<double> gammas = grid(args.gamma_min, args.gamma_max);
  const std::vector<double> rhos = grid(args.rho_min, args.rho_max);

  OutputTarget target(args.out);
  std::ostream& out = target.stream();
  out << "criterion,gamma";
  for (double rho : rhos) out << ",rho=" << format_double(rho);
  out << '\n';
  const auto emit = [&](const char* name, double (*fn)(double, double, std::span<const double>)) {
    for (double gamma : gammas) {
      out << name << ',' << format_double(gamma);
      for (double rho : rhos) out << ',' << format_double(fn(gamma, rho, alpha));
      out << '\n';
    }
  };
  emit("i0", &inefficiency_i0);
  if (args.with_i1) emit("i1", &inefficiency_i1);

  const MinimaxGamma minimax = minimax_gamma(alpha, args.gamma_min, args.gamma_max, args.rho_min,
                                             args.rho_max, args.step);
  out << "gamma0," << format_double(minimax.gamma0) << ",worst,"
      << format_double(minimax.worst_inefficiency) << '\n';
  return 0;
}

struct ExperimentArgs {
  std::string model = "toy", estimators = "all", rho, dirs, out;
  int m_min = 3, m_max = 12, reps = 500, ansatz = 0, threads = 1;
  std::uint64_t seed = 1;
  ScrambleKind scramble = ScrambleKind::nested_uniform;
};

int run_experiment_cmd(const ExperimentArgs& args) {
  ExperimentGrid grid;
  grid.model = args.model;
  grid.m_min = args.m_min;
  grid.m_max = args.m_max;
  grid.replicates = args.reps;
  grid.estimators = parse_estimator_list(args.estimators);
  if (!args.rho.empty()) grid.rho = parse_rate(args.rho);
  grid.ansatz = args.ansatz;
  grid.seed = args.seed;
  grid.threads = args.threads;
  grid.scramble = args.scramble;
  grid.validate();

  const Model model = resolve_model(args.model);
  const DirectionNumbers dirs = load_dirs(args.dirs);
  const std::vector<ExperimentRow> rows = run_experiment(model, grid, dirs);

  OutputTarget target(args.out);
  write_csv(target.stream(), rows);

  const int fit_lo = std::max(7, grid.m_min);
  const int fit_hi = std::min(12, grid.m_max);
  for (const SlopeFit& fit : fit_slopes(rows, fit_lo, fit_hi)) {
    std::cerr << "slope " << fit.estimator << " m=" << fit.m_lo << ".." << fit.m_hi << ": "
              << format_double(fit.slope) << '\n';
  }
  return 0;
}

struct NetcheckArgs {
  std::string beta, dirs, out;
  int d = 2, m = 8;
  std::uint64_t seed = 1;
  ScrambleKind scramble = ScrambleKind::nested_uniform;
  bool require_nets = false;
};

int run_netcheck(const NetcheckArgs& args) {
  if (args.d < 1 || args.d > 6) throw CapabilityError("netcheck supports 1 <= d <= 6");
  if (args.m < 0 || args.m > 12) throw CapabilityError("netcheck supports 0 <= m <= 12");

  const DirectionNumbers dirs = load_dirs(args.dirs);
  const DigitalPointSet base = sobol_points(dirs, args.d, args.m);
  const DigitalPointSet randomized = scramble(base, args.scramble, args.seed);
  const PointArray points = to_unit_cube(randomized);

  const int t_full = min_t(points, args.m, args.d);
  const bool stratified = verify_stratified(points);

  OutputTarget target(args.out);
  std::ostream& out = target.stream();
  out << "d," << args.d << '\n';
  out << "m," << args.m << '\n';
  out << "min_t," << t_full << '\n';
  out << "stratified," << (stratified ? "yes" : "no") << '\n';
  if (args.beta.empty()) return 0;

  if (args.d < 2) throw std::invalid_argument("--beta needs d >= 2 (first coordinate selects)");
  const std::vector<double> beta = parse_number_list(args.beta);
  const StratumSelector selector = build_selector(beta);

  out << "stratum,l,beta,m_l,min_t,bound,verdict\n";
  const std::int64_t n = points.size();
  for (std::size_t l = 0; l < beta.size(); ++l) {
    // A fraction 2^-kappa has mantissa exactly 1/2; anything else is not
    // a dyadic stratum and has no net guarantee.
    int exponent = 0;
    const double mantissa = std::frexp(beta[l], &exponent);
    const int kappa = 1 - exponent;
    const bool dyadic = (mantissa == 0.5) && kappa >= 0 && kappa <= args.m;
    if (!dyadic) {
      if (args.require_nets) {
        throw InfeasibleError("stratum " + std::to_string(l + 1) +
                              " fraction is not a power of two within 2^-m");
      }
      out << "stratum," << (l + 1) << ',' << format_double(beta[l]) << ",-,-,-,skipped\n";
      continue;
    }

    const int m_l = args.m - kappa;
    PointArray sub(std::int64_t{1} << m_l, args.d - 1);
    std::int64_t filled = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double v = points.at(i, 0);
      if (v < selector.bounds[l] || v >= selector.bounds[l + 1]) continue;
      if (filled == sub.size()) {
        ++filled;  // over-full stratum: leave a count mismatch to report
        break;
      }
      for (int j = 1; j < args.d; ++j) sub.at(filled, j - 1) = points.at(i, j);
      ++filled;
    }

    const int bound = std::min(t_full, m_l);
    bool pass = (filled == sub.size());
    int t_sub = -1;
    if (pass) {
      t_sub = min_t(sub, m_l, args.d - 1);
      pass = t_sub <= bound;
    }
    out << "stratum," << (l + 1) << ',' << fraction_text(kappa) << ',' << m_l << ','
        << (t_sub < 0 ? std::string("-") : std::to_string(t_sub)) << ',' << bound << ','
        << (pass ? "pass" : "fail") << '\n';
    if (!pass && args.require_nets) {
      throw InfeasibleError("stratum " + std::to_string(l + 1) + " is not a digital net");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized quasi-Monte Carlo for mixtures with one categorical variable"};
  app.require_subcommand(1);

  const std::map<std::string, ScrambleKind> scramble_names{
      {"nested_uniform", ScrambleKind::nested_uniform},
      {"nested", ScrambleKind::nested_uniform},
      {"linear_shift", ScrambleKind::linear_shift},
      {"shift", ScrambleKind::linear_shift},
      {"none", ScrambleKind::none},
  };

  AllocateArgs alloc;
  CLI::App* cmd_allocate = app.add_subcommand("allocate", "Plan per-stratum sample sizes");
  cmd_allocate->add_option("--alpha", alloc.alpha, "Mixture weights, comma separated");
  cmd_allocate->add_option("--alpha-file", alloc.alpha_file, "File of mixture weights");
  cmd_allocate->add_option("--n", alloc.n, "Total sample budget")->required();
  cmd_allocate->add_option("--rho", alloc.rho, "Variance decay rate (>= 1 or inf)");
  cmd_allocate->add_option("--ansatz", alloc.ansatz, "0 uncorrelated, 1 correlated errors");
  cmd_allocate->add_flag("--pow2", alloc.pow2, "Restrict counts to powers of two");
  cmd_allocate->add_option("--tau", alloc.tau, "Per-stratum variance weights");
  cmd_allocate->add_option("--cost", alloc.cost, "Per-stratum sampling costs");
  cmd_allocate->add_option("--rho-per-stratum", alloc.rho_per_stratum, "Per-stratum rates");
  cmd_allocate->add_option("--out", alloc.out, "Write CSV here instead of stdout");

  int partitions_L = 0;
  std::string partitions_out;
  CLI::App* cmd_partitions =
      app.add_subcommand("partitions", "List splits of 1 into L negative powers of two");
  cmd_partitions->add_option("--L", partitions_L, "Number of strata")->required();
  cmd_partitions->add_option("--out", partitions_out, "Write listing here instead of stdout");

  InefficiencyArgs ineff;
  CLI::App* cmd_ineff =
      app.add_subcommand("inefficiency", "Tabulate the design-rate penalty I(gamma | rho)");
  cmd_ineff->add_option("--alpha", ineff.alpha, "Mixture weights, comma separated");
  cmd_ineff->add_option("--alpha-file", ineff.alpha_file, "File of mixture weights");
  cmd_ineff->add_option("--gamma-min", ineff.gamma_min, "Design-rate grid start");
  cmd_ineff->add_option("--gamma-max", ineff.gamma_max, "Design-rate grid end");
  cmd_ineff->add_option("--rho-min", ineff.rho_min, "True-rate grid start");
  cmd_ineff->add_option("--rho-max", ineff.rho_max, "True-rate grid end");
  cmd_ineff->add_option("--step", ineff.step, "Grid step for both axes");
  cmd_ineff->add_flag("--i1", ineff.with_i1, "Also tabulate the correlated-error criterion");
  cmd_ineff->add_option("--out", ineff.out, "Write CSV here instead of stdout");

  ExperimentArgs exp;
  CLI::App* cmd_exp =
      app.add_subcommand("experiment", "Replicate-variance study over estimators and sizes");
  cmd_exp->add_option("--model", exp.model, "toy, flood, or file:<path>");
  cmd_exp->add_option("--m-min", exp.m_min, "Smallest log2 sample size");
  cmd_exp->add_option("--m-max", exp.m_max, "Largest log2 sample size");
  cmd_exp->add_option("--reps", exp.reps, "Replicates per cell (>= 2)");
  cmd_exp->add_option("--estimators", exp.estimators,
                      "Comma list of mc, rqmc, rqmc_adj, rqmc_pow2, rqmc_strat, or all");
  cmd_exp->add_option("--rho", exp.rho, "Override the model's variance decay rate");
  cmd_exp->add_option("--ansatz", exp.ansatz, "0 uncorrelated, 1 correlated errors");
  cmd_exp->add_option("--seed", exp.seed, "Master seed");
  cmd_exp->add_option("--threads", exp.threads, "Replicate threads");
  cmd_exp->add_option("--scramble", exp.scramble, "Randomization")
      ->transform(CLI::CheckedTransformer(scramble_names, CLI::ignore_case));
  cmd_exp->add_option("--dirs", exp.dirs, "Direction-number file");
  cmd_exp->add_option("--out", exp.out, "Write CSV here instead of stdout");

  NetcheckArgs net;
  CLI::App* cmd_net = app.add_subcommand("netcheck", "Verify net quality and stratification");
  cmd_net->add_option("--d", net.d, "Dimension (<= 6)");
  cmd_net->add_option("--m", net.m, "log2 point count (<= 12)");
  cmd_net->add_option("--seed", net.seed, "Scramble seed");
  cmd_net->add_option("--scramble", net.scramble, "Randomization")
      ->transform(CLI::CheckedTransformer(scramble_names, CLI::ignore_case));
  cmd_net->add_option("--beta", net.beta, "Stratum fractions for per-stratum verdicts");
  cmd_net->add_flag("--require-nets", net.require_nets,
                    "Exit 2 when a stratum lacks a verified net");
  cmd_net->add_option("--dirs", net.dirs, "Direction-number file");
  cmd_net->add_option("--out", net.out, "Write report here instead of stdout");

  int rc = 0;
  cmd_allocate->callback([&] { rc = run_allocate(alloc); });
  cmd_partitions->callback([&] { rc = run_partitions(partitions_L, partitions_out); });
  cmd_ineff->callback([&] { rc = run_inefficiency(ineff); });
  cmd_exp->callback([&] { rc = run_experiment_cmd(exp); });
  cmd_net->callback([&] { rc = run_netcheck(net); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
