#pragma once

#include <string>

#include "rqmcmix/estimators.hpp"
#include "rqmcmix/mixture.hpp"

namespace rqmcmix {

/// A mixture paired with the integrand evaluated on its samples.
struct Model {
  std::string name;
  MixtureSpec spec;
  Integrand integrand;
};

/// Eight shifted-normal strata with weights (0.50, 0.44, 0.01 x 6) and
/// integrand exp(-x^2) cos(x); smooth enough for the steepest net rates.
Model toy_model();

/// Four-variable river flood depth H = (Q / (Ks B sqrt((Zm - Zv)/5000)))^{3/5}
/// with B = 300, mixing nominal and adverse distributions for Q and Ks
/// with weights (0.95, 0.02, 0.02, 0.01).
Model flood_model();

/// Loads a mixture file and attaches the integrand named by its
/// "integrand" key: first_coordinate (default), sum, toy, or flood_depth.
Model model_from_file(const std::string& path);

/// Resolves "toy", "flood", or "file:<path>".
Model resolve_model(const std::string& name);

}  // namespace rqmcmix
