#include "latentscope/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "latentscope/errors.hpp"
#include "latentscope/rng.hpp"

namespace latentscope {

void MixtureModel::validate() const {
  if (n_dims < 1) throw ValidationError("mixture model needs n_dims >= 1");
  if (components.empty()) throw ValidationError("mixture model needs at least one component");
  double weight_sum = 0.0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& comp = components[c];
    if (!(comp.weight > 0.0 && comp.weight <= 1.0)) {
      throw ValidationError("component " + std::to_string(c) + " weight " +
                            std::to_string(comp.weight) + " is outside (0, 1]");
    }
    if (!(comp.stddev > 0.0)) {
      throw ValidationError("component " + std::to_string(c) + " stddev must be positive");
    }
    if (comp.mean.size() != n_dims) {
      throw ValidationError("component " + std::to_string(c) + " mean has length " +
                            std::to_string(comp.mean.size()) + ", expected " +
                            std::to_string(n_dims));
    }
    weight_sum += comp.weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) {
    throw ValidationError("component weights sum to " + std::to_string(weight_sum) +
                          ", expected 1 within 1e-12");
  }
}

MixtureModel parse_mixture_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed mixture JSON: ") + e.what());
  }
  MixtureModel model;
  try {
    model.n_dims = doc.at("dims").get<std::size_t>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& comp : doc.at("components")) {
      MixtureComponent mc;
      mc.weight = comp.at("weight").get<double>();
      mc.stddev = comp.at("stddev").get<double>();
      mc.mean = comp.at("mean").get<std::vector<double>>();
      model.components.push_back(std::move(mc));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("mixture JSON is missing or mistypes a field: ") + e.what());
  }
  model.validate();
  return model;
}

std::string mixture_to_json(const MixtureModel& model) {
  model.validate();
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["dims"] = model.n_dims;
  doc["seed"] = model.seed;
  doc["components"] = nlohmann::json::array();
  for (const auto& comp : model.components) {
    doc["components"].push_back(
        {{"weight", comp.weight}, {"mean", comp.mean}, {"stddev", comp.stddev}});
  }
  return doc.dump(2) + "\n";
}

MixtureModel load_mixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mixture spec: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mixture_json(buf.str());
}

LatentMatrix sample_mixture(const MixtureModel& model, std::size_t n, std::uint64_t seed) {
  model.validate();
  if (n < 1) throw ValidationError("sample count must be at least 1");

  std::vector<double> cumulative;
  cumulative.reserve(model.components.size());
  double acc = 0.0;
  for (const auto& comp : model.components) {
    acc += comp.weight;
    cumulative.push_back(acc);
  }

  Xoshiro256PlusPlus rng(seed);
  const std::size_t d = model.n_dims;
  std::vector<double> values(n * d);

  for (std::size_t row = 0; row < n; ++row) {
    // One uniform picks the component; the cumulative table keeps the pick
    // well defined even when rounding leaves the last entry slightly off 1.
    const double u = rng.next_double();
    std::size_t c = 0;
    while (c + 1 < cumulative.size() && u >= cumulative[c]) ++c;
    const auto& comp = model.components[c];

    double* out = values.data() + row * d;
    for (std::size_t pair = 0; pair * 2 < d; ++pair) {
      const double u1 = rng.next_double();
      const double u2 = rng.next_double();
      const GaussianPair g = box_muller(u1, u2);
      const std::size_t i = pair * 2;
      out[i] = comp.mean[i] + comp.stddev * g.z0;
      if (i + 1 < d) out[i + 1] = comp.mean[i + 1] + comp.stddev * g.z1;
    }
  }
  return LatentMatrix(n, d, std::move(values));
}

double pdf(const MixtureModel& model, std::span<const double> point) {
  if (point.size() != model.n_dims) {
    throw ValidationError("pdf point has length " + std::to_string(point.size()) +
                          ", expected " + std::to_string(model.n_dims));
  }
  const double d = static_cast<double>(model.n_dims);
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  double total = 0.0;
  for (const auto& comp : model.components) {
    double dist_sq = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
      const double diff = point[i] - comp.mean[i];
      dist_sq += diff * diff;
    }
    const double var = comp.stddev * comp.stddev;
    const double log_density =
        -0.5 * dist_sq / var - d * std::log(comp.stddev) - 0.5 * d * log_two_pi;
    total += comp.weight * std::exp(log_density);
  }
  return total;
}

ScoreVector quality_proxy(const MixtureModel& model, const LatentMatrix& codes) {
  if (codes.dims() != model.n_dims) {
    throw ValidationError("codes dimensionality " + std::to_string(codes.dims()) +
                          " does not match mixture dims " + std::to_string(model.n_dims));
  }
  ScoreVector scores(codes.rows());
  for (std::size_t r = 0; r < codes.rows(); ++r) {
    scores[r] = pdf(model, codes.row(r));
  }
  return scores;
}

}  // namespace latentscope
