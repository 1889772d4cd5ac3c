#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "latentscope/density.hpp"
#include "latentscope/latent_matrix.hpp"

namespace latentscope {

// Real-code matrix plus the per-code k-NN sphere radii that back all
// sphere-membership metrics. radii[j] is the exact Euclidean distance from
// real row j to its k-th nearest other real row.
struct ManifoldIndex {
  LatentMatrix real;
  std::size_t k = 0;
  std::vector<double> radii;
};

struct MetricReport {
  double precision = 0.0;
  double recall = 0.0;
  double density = 0.0;
  double coverage = 0.0;
  std::size_t k_precision_recall = 0;
  std::size_t k_density_coverage = 0;
  std::size_t n_fake = 0;
  std::size_t n_real = 0;
};

// Out-of-manifold rarity entries are nullopt, never a magic number.
using RarityScores = std::vector<std::optional<double>>;

// Exact k-NN radii by full pairwise distances (per-coordinate subtraction,
// no approximation). Requires 1 <= k <= real.rows() - 1.
ManifoldIndex build_manifold(const LatentMatrix& real, std::size_t k, std::size_t threads = 0);

// realism[g] = max_j radii[j] / |fake_g - real_j|. A zero distance yields
// the +infinity sentinel ("maximally realistic"), keeping rankings total.
// A score >= 1 means the fake code lies inside at least one real sphere.
ScoreVector realism_scores(const LatentMatrix& fake, const ManifoldIndex& index,
                           std::size_t threads = 0);

// rarity[g] = min radius over the real spheres containing fake_g (closed
// balls); nullopt when no sphere contains it.
RarityScores rarity_scores(const LatentMatrix& fake, const ManifoldIndex& index,
                           std::size_t threads = 0);

// precision: fraction of fake rows inside >= 1 real k-NN sphere.
// recall: fraction of real rows inside >= 1 fake k-NN sphere.
std::pair<double, double> precision_recall(const LatentMatrix& fake, const LatentMatrix& real,
                                           std::size_t k, std::size_t threads = 0);

// density: (1 / (k * n_fake)) * sum over (fake, real) pairs of containment.
// coverage: fraction of real spheres containing >= 1 fake row.
std::pair<double, double> density_coverage(const LatentMatrix& fake, const LatentMatrix& real,
                                           std::size_t k, std::size_t threads = 0);

// Fraction of `points` rows lying inside at least one sphere of `index`.
// The containment predicate (distance <= radius, closed balls) is shared by
// precision, recall, coverage, density and rarity.
double covered_fraction(const ManifoldIndex& index, const LatentMatrix& points,
                        std::size_t threads = 0);

MetricReport compute_metrics(const LatentMatrix& fake, const LatentMatrix& real,
                             std::size_t k_precision_recall, std::size_t k_density_coverage,
                             std::size_t threads = 0);

}  // namespace latentscope
