#include "latentscope/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "latentscope/errors.hpp"
#include "latentscope/manifold.hpp"

namespace latentscope {

Ranking rank_by_score(const ScoreVector& scores) {
  if (scores.empty()) throw ValidationError("cannot rank an empty score vector");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    if (std::isnan(s) || s == -std::numeric_limits<double>::infinity()) {
      throw ValidationError("score at index " + std::to_string(i) +
                            " is not finite or +inf; cannot rank");
    }
  }
  Ranking ranking;
  ranking.scores = scores;
  ranking.order.resize(scores.size());
  std::iota(ranking.order.begin(), ranking.order.end(), std::size_t{0});
  std::sort(ranking.order.begin(), ranking.order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  return ranking;
}

std::vector<std::size_t> select(const Ranking& ranking, Selection which, std::size_t k) {
  const std::size_t n = ranking.order.size();
  if (k > n) {
    throw ValidationError("selection size " + std::to_string(k) + " exceeds ranking size " +
                          std::to_string(n));
  }
  if (k == 0) return {};
  switch (which) {
    case Selection::TopK:
      return {ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(k)};
    case Selection::BottomK: {
      std::vector<std::size_t> out(ranking.order.end() - static_cast<std::ptrdiff_t>(k),
                                   ranking.order.end());
      std::reverse(out.begin(), out.end());  // ascending score
      return out;
    }
    case Selection::MiddleK: {
      // Window of k ranks centered at position floor(n/2); for even k the
      // extra slot goes to the left. k/2 == ceil((k-1)/2) in integer math.
      const std::size_t lo = n / 2 - k / 2;
      return {ranking.order.begin() + static_cast<std::ptrdiff_t>(lo),
              ranking.order.begin() + static_cast<std::ptrdiff_t>(lo + k)};
    }
  }
  throw ConfigError("unhandled selection kind");
}

std::vector<double> mean_code(const LatentMatrix& codes) {
  std::vector<double> mean(codes.dims(), 0.0);
  for (std::size_t r = 0; r < codes.rows(); ++r) {
    const double* row = codes.data() + r * codes.dims();
    for (std::size_t c = 0; c < codes.dims(); ++c) mean[c] += row[c];
  }
  const double inv = 1.0 / static_cast<double>(codes.rows());
  for (double& m : mean) m *= inv;
  return mean;
}

LatentMatrix truncate_codes(const LatentMatrix& codes, std::span<const double> mean, double psi) {
  if (mean.size() != codes.dims()) {
    throw ValidationError("mean length " + std::to_string(mean.size()) +
                          " does not match code dimensionality " + std::to_string(codes.dims()));
  }
  if (!(psi >= 0.0 && psi <= 1.0)) {
    throw ConfigError("truncation psi must lie in [0, 1], got " + std::to_string(psi) +
                      " (extrapolation is refused)");
  }
  std::vector<double> values(codes.values().size());
  for (std::size_t r = 0; r < codes.rows(); ++r) {
    const double* z = codes.data() + r * codes.dims();
    double* out = values.data() + r * codes.dims();
    for (std::size_t c = 0; c < codes.dims(); ++c) {
      out[c] = mean[c] + psi * (z[c] - mean[c]);
    }
  }
  return LatentMatrix(codes.rows(), codes.dims(), std::move(values));
}

LatentMatrix apply_direction(const LatentMatrix& codes, std::span<const double> direction,
                             double alpha) {
  if (direction.size() != codes.dims()) {
    throw ValidationError("direction length " + std::to_string(direction.size()) +
                          " does not match code dimensionality " + std::to_string(codes.dims()));
  }
  if (!std::isfinite(alpha)) throw ConfigError("edit strength alpha must be finite");
  std::vector<double> values(codes.values().size());
  for (std::size_t r = 0; r < codes.rows(); ++r) {
    const double* z = codes.data() + r * codes.dims();
    double* out = values.data() + r * codes.dims();
    for (std::size_t c = 0; c < codes.dims(); ++c) {
      out[c] = z[c] + alpha * direction[c];
    }
  }
  return LatentMatrix(codes.rows(), codes.dims(), std::move(values));
}

namespace {

LatentMatrix take_rows(const LatentMatrix& source, std::span<const std::size_t> rows) {
  std::vector<double> values;
  values.reserve(rows.size() * source.dims());
  for (const std::size_t r : rows) {
    const auto row = source.row(r);
    values.insert(values.end(), row.begin(), row.end());
  }
  return LatentMatrix(rows.size(), source.dims(), std::move(values));
}

}  // namespace

std::vector<CurvePoint> topk_metric_curve(const LatentMatrix& fake, const LatentMatrix& real,
                                          const Ranking& ranking, const std::vector<std::size_t>& ks,
                                          std::size_t k_nn, std::size_t threads) {
  if (ranking.order.size() != fake.rows()) {
    throw ValidationError("ranking covers " + std::to_string(ranking.order.size()) +
                          " rows but the fake set has " + std::to_string(fake.rows()));
  }
  if (ks.empty()) throw ConfigError("top-k curve needs at least one k");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i > 0 && ks[i] <= ks[i - 1]) {
      throw ConfigError("top-k curve sizes must be strictly ascending");
    }
    if (ks[i] > fake.rows()) {
      throw ConfigError("top-k curve size " + std::to_string(ks[i]) + " exceeds fake rows " +
                        std::to_string(fake.rows()));
    }
    if (ks[i] < k_nn + 1) {
      throw ConfigError("top-k curve size " + std::to_string(ks[i]) +
                        " is too small for k_nn=" + std::to_string(k_nn) +
                        " (need at least k_nn + 1 rows)");
    }
  }

  // Shared across the curve: the real manifold and per-row realism scores.
  const ManifoldIndex real_index = build_manifold(real, k_nn, threads);
  const ScoreVector realism = realism_scores(fake, real_index, threads);

  std::vector<CurvePoint> curve;
  curve.reserve(ks.size());
  for (const std::size_t k : ks) {
    const std::span<const std::size_t> selected(ranking.order.data(), k);
    const LatentMatrix subset = take_rows(fake, selected);

    CurvePoint point;
    point.top_k = k;
    point.precision = covered_fraction(real_index, subset, threads);
    const ManifoldIndex subset_index = build_manifold(subset, k_nn, threads);
    point.recall = covered_fraction(subset_index, real, threads);

    double sum = 0.0;
    std::size_t finite = 0;
    for (const std::size_t idx : selected) {
      if (std::isinf(realism[idx])) continue;
      sum += realism[idx];
      ++finite;
    }
    point.realism_excluded = k - finite;
    point.mean_realism = finite > 0 ? sum / static_cast<double>(finite)
                                    : std::numeric_limits<double>::quiet_NaN();
    curve.push_back(point);
  }
  return curve;
}

std::vector<std::pair<double, double>> truncation_sweep(const LatentMatrix& codes,
                                                        const LatentMatrix& train,
                                                        const std::vector<double>& psis,
                                                        const DensityConfig& config) {
  if (psis.empty()) throw ConfigError("truncation sweep needs at least one psi");
  const std::vector<double> mean = mean_code(train);
  std::vector<std::pair<double, double>> result;
  result.reserve(psis.size());
  for (const double psi : psis) {
    const LatentMatrix truncated = truncate_codes(codes, mean, psi);
    const ScoreVector scores = latent_density(truncated, train, config);
    double sum = 0.0;
    for (const double s : scores) sum += s;
    result.emplace_back(psi, sum / static_cast<double>(scores.size()));
  }
  return result;
}

std::vector<std::pair<double, double>> sigma_recall_analysis(const LatentMatrix& fake,
                                                             const LatentMatrix& real,
                                                             const std::vector<double>& sigmas,
                                                             double top_fraction, std::size_t k_nn,
                                                             const DensityConfig& config) {
  if (sigmas.empty()) throw ConfigError("sigma/recall analysis needs at least one sigma");
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw ConfigError("top fraction must lie in (0, 1], got " + std::to_string(top_fraction));
  }
  const std::size_t n_selected = std::min<std::size_t>(
      fake.rows(),
      static_cast<std::size_t>(std::llround(top_fraction * static_cast<double>(fake.rows()))));
  if (n_selected < k_nn + 1) {
    throw ConfigError("top fraction " + std::to_string(top_fraction) + " of " +
                      std::to_string(fake.rows()) + " fake rows keeps " +
                      std::to_string(n_selected) + " rows, too few for k_nn=" +
                      std::to_string(k_nn));
  }

  std::vector<std::pair<double, double>> result;
  result.reserve(sigmas.size());
  for (const double sigma : sigmas) {
    DensityConfig cfg = config;
    cfg.sigma = sigma;
    const ScoreVector scores = latent_density(fake, real, cfg);
    const Ranking ranking = rank_by_score(scores);
    const auto selected = select(ranking, Selection::TopK, n_selected);
    const LatentMatrix subset = take_rows(fake, selected);
    const ManifoldIndex subset_index = build_manifold(subset, k_nn, cfg.threads);
    result.emplace_back(sigma, covered_fraction(subset_index, real, cfg.threads));
  }
  return result;
}

namespace {

// Ranks with average-rank tie handling, 1-based.
std::vector<double> average_ranks(const ScoreVector& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double rank_correlation(const ScoreVector& a, const ScoreVector& b) {
  if (a.size() != b.size()) {
    throw ValidationError("rank correlation inputs have different lengths: " +
                          std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  if (a.size() < 2) throw ValidationError("rank correlation needs at least two entries");

  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;

  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    throw NumericDomainError("rank correlation is undefined for a constant input");
  }
  return cov / std::sqrt(var_a * var_b);
}

}  // namespace latentscope
