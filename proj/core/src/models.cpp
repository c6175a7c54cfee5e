#include "rqmcmix/models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rqmcmix/errors.hpp"

namespace rqmcmix {

namespace {

Integrand named_integrand(const std::string& name, int coords) {
  if (name == "first_coordinate") {
    return [](int, std::span<const double> x) { return x[0]; };
  }
  if (name == "sum") {
    return [](int, std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v;
      return s;
    };
  }
  if (name == "toy") {
    return [](int, std::span<const double> x) { return std::exp(-x[0] * x[0]) * std::cos(x[0]); };
  }
  if (name == "flood_depth") {
    if (coords != 4) throw ParseError("flood_depth integrand needs 4 coordinates (Q, Ks, Zv, Zm)");
    return [](int, std::span<const double> x) {
      const double q = x[0];
      const double ks = x[1];
      const double slope = (x[3] - x[2]) / 5000.0;
      return std::pow(q / (ks * 300.0 * std::sqrt(slope)), 0.6);
    };
  }
  throw ParseError("unknown integrand \"" + name + "\"");
}

}  // namespace

Model toy_model() {
  Model model;
  model.name = "toy";
  model.spec.alpha = {0.50, 0.44, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01};
  const double theta[] = {0.7, 1.0, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
  for (double t : theta) {
    model.spec.transforms.push_back({DistributionSpec::make_shifted_normal(t)});
  }
  model.spec.validate();
  model.integrand = named_integrand("toy", 1);
  return model;
}

Model flood_model() {
  Model model;
  model.name = "flood";
  model.spec.alpha = {0.95, 0.02, 0.02, 0.01};

  const auto q_nominal = DistributionSpec::make_frechet(6.0, 1300.0);
  const auto q_adverse = DistributionSpec::make_frechet(6.0, 3900.0);
  const auto ks_nominal = DistributionSpec::make_gamma(90.0, 1.0 / 3.0);
  const auto ks_adverse = DistributionSpec::make_gamma(15.0, 1.0);
  const auto zv = DistributionSpec::make_uniform(49.0, 51.0);
  const auto zm = DistributionSpec::make_uniform(54.0, 56.0);

  model.spec.transforms.push_back({q_nominal, ks_nominal, zv, zm});
  model.spec.transforms.push_back({q_adverse, ks_nominal, zv, zm});
  model.spec.transforms.push_back({q_nominal, ks_adverse, zv, zm});
  model.spec.transforms.push_back({q_adverse, ks_adverse, zv, zm});
  model.spec.validate();
  model.integrand = named_integrand("flood_depth", 4);
  return model;
}

Model model_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mixture file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();

  std::string integrand_name = "first_coordinate";
  try {
    const auto root = nlohmann::json::parse(buffer.str());
    if (root.is_object() && root.contains("integrand")) {
      integrand_name = root.at("integrand").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }

  Model model;
  model.name = path;
  std::istringstream spec_stream(buffer.str());
  model.spec = load_mixture_spec(spec_stream);
  model.integrand = named_integrand(integrand_name, model.spec.coords());
  return model;
}

Model resolve_model(const std::string& name) {
  if (name == "toy") return toy_model();
  if (name == "flood") return flood_model();
  if (name.rfind("file:", 0) == 0) return model_from_file(name.substr(5));
  throw std::invalid_argument("model must be toy, flood, or file:<path>");
}

}  // namespace rqmcmix
