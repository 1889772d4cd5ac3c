#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "latentscope/latent_matrix.hpp"

namespace latentscope {

// Per-sample scalar scores, aligned to query-row order.
using ScoreVector = std::vector<double>;

struct DensityConfig {
  // Gaussian kernel bandwidth in latent-space distance units. Not rescaled
  // to the data; callers pick it per latent space.
  double sigma = 20.0;
  // Query rows per block in the fast path. Affects performance only, never
  // results.
  std::size_t chunk_rows = 256;
  // Worker threads; 0 = all hardware threads. Results are bit-identical for
  // any value.
  std::size_t threads = 0;
};

// Optional progress hook: called with (rows scored so far, total rows).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

// Latent density of each query code against the training set: the mean
// Gaussian-kernelized distance (1/|Z|) * sum_i exp(-|q - z_i|^2 / (2 sigma^2)).
//
// Plain scalar evaluation: distances by per-coordinate subtraction, kernel
// terms accumulated in ascending training-row order in 64-bit. This is the
// reference the fast path is checked against; keep it free of the Gram
// expansion used there.
ScoreVector latent_density_reference(const LatentMatrix& query, const LatentMatrix& train,
                                     const DensityConfig& config);

// Same contract as latent_density_reference, computed blockwise via the
// expansion |a-b|^2 = |a|^2 + |b|^2 - 2 a.b (clamped at 0) so the inner work
// is a matrix product. Query rows are processed in fixed chunks of
// config.chunk_rows and each row reduces over training blocks in ascending
// order, so results do not depend on the thread count.
ScoreVector latent_density(const LatentMatrix& query, const LatentMatrix& train,
                           const DensityConfig& config, const ProgressFn& progress = {});

// Column j holds latent_density(query, train) at sigma = sigmas[j].
std::vector<ScoreVector> sigma_sweep(const LatentMatrix& query, const LatentMatrix& train,
                                     const std::vector<double>& sigmas,
                                     const DensityConfig& base_config = {});

}  // namespace latentscope
