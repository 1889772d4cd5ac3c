#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "latentscope/density.hpp"
#include "latentscope/latent_matrix.hpp"

namespace latentscope {

// Query indices sorted by score descending; ties broken by ascending index,
// so identical score vectors always produce identical orderings.
struct Ranking {
  std::vector<std::size_t> order;
  ScoreVector scores;
};

enum class Selection { TopK, MiddleK, BottomK };

struct CurvePoint {
  std::size_t top_k = 0;
  double precision = 0.0;
  double recall = 0.0;
  // Mean realism over the selected samples, +inf sentinels excluded.
  double mean_realism = 0.0;
  std::size_t realism_excluded = 0;
};

// Scores must be finite or +inf (sentinels rank first); NaN or -inf is a
// validation error.
Ranking rank_by_score(const ScoreVector& scores);

// top-k: best k in rank order. bottom-k: worst k, ascending score.
// middle-k: the window of k ranks centered at position floor(n/2),
// left-biased when the window cannot be centered exactly.
std::vector<std::size_t> select(const Ranking& ranking, Selection which, std::size_t k);

// Coordinate-wise mean of all rows.
std::vector<double> mean_code(const LatentMatrix& codes);

// Truncation trick: every row z becomes mean + psi * (z - mean).
// psi = 0 collapses to the mean, psi = 1 is the identity; anything outside
// [0, 1] is refused (extrapolation is not the interpolation regime).
LatentMatrix truncate_codes(const LatentMatrix& codes, std::span<const double> mean, double psi);

// Latent editing: rows become z + alpha * direction. The direction vector
// comes from the caller (e.g. an attribute direction).
LatentMatrix apply_direction(const LatentMatrix& codes, std::span<const double> direction,
                             double alpha);

// For each k in ks (strictly ascending, each >= k_nn + 1): precision/recall
// of the top-k fake rows against `real`, plus their mean realism. The real
// manifold and per-row realism scores are computed once and shared across
// the curve.
std::vector<CurvePoint> topk_metric_curve(const LatentMatrix& fake, const LatentMatrix& real,
                                          const Ranking& ranking, const std::vector<std::size_t>& ks,
                                          std::size_t k_nn, std::size_t threads = 0);

// Mean latent density of `codes` truncated toward mean_code(train), one
// entry per psi.
std::vector<std::pair<double, double>> truncation_sweep(const LatentMatrix& codes,
                                                        const LatentMatrix& train,
                                                        const std::vector<double>& psis,
                                                        const DensityConfig& config);

// For each sigma: rank fake rows by latent density against `real`, keep the
// top fraction, and report that subset's recall. Returns (sigma, recall)
// pairs.
std::vector<std::pair<double, double>> sigma_recall_analysis(const LatentMatrix& fake,
                                                             const LatentMatrix& real,
                                                             const std::vector<double>& sigmas,
                                                             double top_fraction, std::size_t k_nn,
                                                             const DensityConfig& config = {});

// Spearman rank correlation with average-rank tie handling. Throws
// NumericDomainError when either input is constant (undefined correlation).
double rank_correlation(const ScoreVector& a, const ScoreVector& b);

}  // namespace latentscope
