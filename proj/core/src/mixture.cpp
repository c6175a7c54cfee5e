#include "rqmcmix/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rqmcmix/errors.hpp"

namespace rqmcmix {

void MixtureSpec::validate() const {
  if (alpha.empty()) throw std::invalid_argument("mixture needs at least one stratum");
  if (transforms.size() != alpha.size()) {
    throw std::invalid_argument("one transform list per stratum required");
  }
  double sum = 0.0;
  for (double a : alpha) {
    if (!(a > 0.0)) throw std::invalid_argument("mixture weights must be positive");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights must sum to 1");
  }
  const std::size_t s = transforms.front().size();
  if (s == 0) throw std::invalid_argument("strata need at least one coordinate");
  for (const auto& list : transforms) {
    if (list.size() != s) throw std::invalid_argument("all strata must share the coordinate count");
    for (const auto& dist : list) dist.validate();
  }
  if (!original_index.empty() && original_index.size() != alpha.size()) {
    throw std::invalid_argument("original index permutation has the wrong length");
  }
}

StratumSelector build_selector(std::span<const double> beta) {
  if (beta.empty()) throw std::invalid_argument("need at least one fraction");
  double sum = 0.0;
  for (std::size_t l = 0; l < beta.size(); ++l) {
    if (!(beta[l] > 0.0)) throw std::invalid_argument("fractions must be positive");
    if (l > 0 && beta[l] > beta[l - 1] + 1e-15) {
      throw std::invalid_argument("fractions must be non-increasing");
    }
    sum += beta[l];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("fractions must sum to 1");

  StratumSelector selector;
  selector.beta.assign(beta.begin(), beta.end());
  selector.bounds.resize(beta.size() + 1);
  selector.bounds[0] = 0.0;
  for (std::size_t l = 0; l < beta.size(); ++l) {
    selector.bounds[l + 1] = selector.bounds[l] + beta[l];
  }
  selector.bounds.back() = 1.0;
  return selector;
}

int select_stratum(const StratumSelector& selector, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("selector input must lie in [0,1]");
  const auto& b = selector.bounds;
  // First bound strictly above v; v = 1 falls through to the last stratum.
  const auto it = std::upper_bound(b.begin() + 1, b.end() - 1, v);
  return static_cast<int>(it - (b.begin() + 1));
}

double weight(const MixtureSpec& spec, std::span<const double> beta, int l) {
  if (l < 0 || l >= spec.strata()) throw std::invalid_argument("stratum index out of range");
  if (beta.size() != spec.alpha.size()) throw std::invalid_argument("fraction length mismatch");
  return spec.alpha[static_cast<std::size_t>(l)] / beta[static_cast<std::size_t>(l)];
}

std::vector<double> transform(const MixtureSpec& spec, int l, std::span<const double> u) {
  if (l < 0 || l >= spec.strata()) throw std::invalid_argument("stratum index out of range");
  const auto& dists = spec.transforms[static_cast<std::size_t>(l)];
  if (u.size() != dists.size()) throw std::invalid_argument("coordinate count mismatch");
  std::vector<double> x(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) x[j] = quantile(dists[j], u[j]);
  return x;
}

namespace {

DistributionSpec parse_distribution(const nlohmann::json& node) {
  if (!node.is_object() || !node.contains("kind")) {
    throw ParseError("distribution record must be an object with a \"kind\"");
  }
  const std::string kind = node.at("kind").get<std::string>();
  const auto field = [&](const char* name) {
    if (!node.contains(name) || !node.at(name).is_number()) {
      throw ParseError(kind + " distribution needs numeric \"" + name + "\"");
    }
    return node.at(name).get<double>();
  };
  if (kind == "normal") return DistributionSpec::make_normal(field("mean"), field("sd"));
  if (kind == "frechet") return DistributionSpec::make_frechet(field("shape"), field("scale"));
  if (kind == "gamma") return DistributionSpec::make_gamma(field("shape"), field("scale"));
  if (kind == "uniform") return DistributionSpec::make_uniform(field("lo"), field("hi"));
  if (kind == "shifted_normal") return DistributionSpec::make_shifted_normal(field("theta"));
  throw ParseError("unknown distribution kind \"" + kind + "\"");
}

}  // namespace

MixtureSpec load_mixture_spec(std::istream& in) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("strata") || !root.at("strata").is_array() ||
      root.at("strata").empty()) {
    throw ParseError("mixture file must contain a non-empty \"strata\" array");
  }

  MixtureSpec spec;
  try {
    for (const auto& stratum : root.at("strata")) {
      if (!stratum.is_object() || !stratum.contains("weight") || !stratum.contains("coords")) {
        throw ParseError("each stratum needs \"weight\" and \"coords\"");
      }
      spec.alpha.push_back(stratum.at("weight").get<double>());
      std::vector<DistributionSpec> dists;
      for (const auto& coord : stratum.at("coords")) dists.push_back(parse_distribution(coord));
      spec.transforms.push_back(std::move(dists));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid mixture file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    // Bad parameter values (sd <= 0, lo >= hi, ...) are content errors too.
    throw ParseError(e.what());
  }

  // Sort strata by descending weight, keeping file order among ties.
  spec.original_index.resize(spec.alpha.size());
  std::iota(spec.original_index.begin(), spec.original_index.end(), 0);
  std::stable_sort(spec.original_index.begin(), spec.original_index.end(), [&](int a, int b) {
    return spec.alpha[static_cast<std::size_t>(a)] > spec.alpha[static_cast<std::size_t>(b)];
  });
  MixtureSpec sorted;
  sorted.original_index = spec.original_index;
  for (int src : spec.original_index) {
    sorted.alpha.push_back(spec.alpha[static_cast<std::size_t>(src)]);
    sorted.transforms.push_back(std::move(spec.transforms[static_cast<std::size_t>(src)]));
  }
  try {
    sorted.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return sorted;
}

}  // namespace rqmcmix
