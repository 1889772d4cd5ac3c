#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "latentscope/density.hpp"
#include "latentscope/latent_matrix.hpp"

namespace latentscope {

// Synthetic latent manifold: a mixture of isotropic Gaussians with an
// analytic density, used as ground truth when validating that the latent
// density score tracks true data density.
struct MixtureComponent {
  double weight = 1.0;
  std::vector<double> mean;
  double stddev = 1.0;
};

struct MixtureModel {
  std::vector<MixtureComponent> components;
  std::size_t n_dims = 0;
  std::uint64_t seed = 0;

  // Weights must sum to 1 within 1e-12, stddevs must be positive, means must
  // have length n_dims. Throws ValidationError otherwise.
  void validate() const;
};

// JSON document: {"schema_version": 1, "dims": ..., "seed": ...,
//                 "components": [{"weight", "mean", "stddev"}, ...]}
MixtureModel parse_mixture_json(const std::string& text);
std::string mixture_to_json(const MixtureModel& model);
MixtureModel load_mixture(const std::filesystem::path& path);

// n i.i.d. draws, fully determined by (model, seed). Per row the stream
// consumes one uniform for the component pick and then ceil(dims/2)
// Box-Muller pairs (two uniforms each); the second Gaussian of the last
// pair is discarded when dims is odd. See rng.hpp for the generator spec.
LatentMatrix sample_mixture(const MixtureModel& model, std::size_t n, std::uint64_t seed);

// Exact mixture density sum_c w_c * N(point; mean_c, stddev_c^2 I).
double pdf(const MixtureModel& model, std::span<const double> point);

// True density at each code: the ground truth that latent density rankings
// are validated against.
ScoreVector quality_proxy(const MixtureModel& model, const LatentMatrix& codes);

}  // namespace latentscope
