#include "latentscope/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "latentscope/errors.hpp"
#include "latentscope/parallel.hpp"

namespace latentscope {

namespace {

double distance(const double* a, const double* b, std::size_t d) {
  double sum = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double diff = a[c] - b[c];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

void check_dims(const LatentMatrix& fake, const LatentMatrix& real) {
  if (fake.dims() != real.dims()) {
    throw ValidationError("fake dimensionality " + std::to_string(fake.dims()) +
                          " does not match real dimensionality " + std::to_string(real.dims()));
  }
}

void check_k(const LatentMatrix& points, std::size_t k, const char* label) {
  if (k < 1 || k > points.rows() - 1) {
    throw ConfigError(std::string(label) + " neighbor count k=" + std::to_string(k) +
                      " is out of range for " + std::to_string(points.rows()) +
                      " rows (need 1 <= k <= rows-1)");
  }
}

}  // namespace

ManifoldIndex build_manifold(const LatentMatrix& real, std::size_t k, std::size_t threads) {
  check_k(real, k, "manifold");
  const std::size_t n = real.rows();
  const std::size_t d = real.dims();
  std::vector<double> radii(n);

  parallel_for(n, threads, [&](std::size_t j) {
    std::vector<double> dist(n);
    const double* self = real.data() + j * d;
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = distance(self, real.data() + i * d, d);
    }
    dist[j] = std::numeric_limits<double>::infinity();  // exclude self
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    radii[j] = dist[k - 1];
  });
  return ManifoldIndex{real, k, std::move(radii)};
}

ScoreVector realism_scores(const LatentMatrix& fake, const ManifoldIndex& index,
                           std::size_t threads) {
  check_dims(fake, index.real);
  const std::size_t n_fake = fake.rows();
  const std::size_t n_real = index.real.rows();
  const std::size_t d = fake.dims();
  ScoreVector scores(n_fake);

  parallel_for(n_fake, threads, [&](std::size_t g) {
    const double* f = fake.data() + g * d;
    double best = 0.0;
    for (std::size_t j = 0; j < n_real; ++j) {
      const double dist_j = distance(f, index.real.data() + j * d, d);
      if (dist_j == 0.0) {
        best = std::numeric_limits<double>::infinity();
        break;
      }
      best = std::max(best, index.radii[j] / dist_j);
    }
    scores[g] = best;
  });
  return scores;
}

RarityScores rarity_scores(const LatentMatrix& fake, const ManifoldIndex& index,
                           std::size_t threads) {
  check_dims(fake, index.real);
  const std::size_t n_fake = fake.rows();
  const std::size_t n_real = index.real.rows();
  const std::size_t d = fake.dims();
  RarityScores scores(n_fake);

  parallel_for(n_fake, threads, [&](std::size_t g) {
    const double* f = fake.data() + g * d;
    double best = std::numeric_limits<double>::infinity();
    bool contained = false;
    for (std::size_t j = 0; j < n_real; ++j) {
      const double dist_j = distance(f, index.real.data() + j * d, d);
      if (dist_j <= index.radii[j]) {
        contained = true;
        best = std::min(best, index.radii[j]);
      }
    }
    if (contained) scores[g] = best;
  });
  return scores;
}

double covered_fraction(const ManifoldIndex& index, const LatentMatrix& points,
                        std::size_t threads) {
  check_dims(points, index.real);
  const std::size_t n_points = points.rows();
  const std::size_t n_spheres = index.real.rows();
  const std::size_t d = points.dims();
  std::vector<unsigned char> covered(n_points, 0);

  parallel_for(n_points, threads, [&](std::size_t g) {
    const double* p = points.data() + g * d;
    for (std::size_t j = 0; j < n_spheres; ++j) {
      if (distance(p, index.real.data() + j * d, d) <= index.radii[j]) {
        covered[g] = 1;
        return;
      }
    }
  });

  std::size_t count = 0;
  for (const auto c : covered) count += c;
  return static_cast<double>(count) / static_cast<double>(n_points);
}

std::pair<double, double> precision_recall(const LatentMatrix& fake, const LatentMatrix& real,
                                           std::size_t k, std::size_t threads) {
  check_dims(fake, real);
  check_k(real, k, "real");
  check_k(fake, k, "fake");
  const ManifoldIndex real_index = build_manifold(real, k, threads);
  const ManifoldIndex fake_index = build_manifold(fake, k, threads);
  const double precision = covered_fraction(real_index, fake, threads);
  const double recall = covered_fraction(fake_index, real, threads);
  return {precision, recall};
}

std::pair<double, double> density_coverage(const LatentMatrix& fake, const LatentMatrix& real,
                                           std::size_t k, std::size_t threads) {
  check_dims(fake, real);
  check_k(real, k, "real");
  check_k(fake, k, "fake");
  const ManifoldIndex real_index = build_manifold(real, k, threads);
  const std::size_t n_fake = fake.rows();
  const std::size_t n_real = real.rows();
  const std::size_t d = fake.dims();

  // density: per-fake containment counts, averaged over k * n_fake.
  std::vector<std::size_t> counts(n_fake, 0);
  parallel_for(n_fake, threads, [&](std::size_t g) {
    const double* f = fake.data() + g * d;
    std::size_t c = 0;
    for (std::size_t j = 0; j < n_real; ++j) {
      if (distance(f, real.data() + j * d, d) <= real_index.radii[j]) ++c;
    }
    counts[g] = c;
  });
  std::size_t total = 0;
  for (const auto c : counts) total += c;
  const double density =
      static_cast<double>(total) / (static_cast<double>(k) * static_cast<double>(n_fake));

  // coverage: real spheres that contain at least one fake row.
  std::vector<unsigned char> hit(n_real, 0);
  parallel_for(n_real, threads, [&](std::size_t j) {
    const double* r = real.data() + j * d;
    for (std::size_t g = 0; g < n_fake; ++g) {
      if (distance(fake.data() + g * d, r, d) <= real_index.radii[j]) {
        hit[j] = 1;
        return;
      }
    }
  });
  std::size_t hits = 0;
  for (const auto h : hit) hits += h;
  const double coverage = static_cast<double>(hits) / static_cast<double>(n_real);

  return {density, coverage};
}

MetricReport compute_metrics(const LatentMatrix& fake, const LatentMatrix& real,
                             std::size_t k_precision_recall, std::size_t k_density_coverage,
                             std::size_t threads) {
  MetricReport report;
  const auto pr = precision_recall(fake, real, k_precision_recall, threads);
  const auto dc = density_coverage(fake, real, k_density_coverage, threads);
  report.precision = pr.first;
  report.recall = pr.second;
  report.density = dc.first;
  report.coverage = dc.second;
  report.k_precision_recall = k_precision_recall;
  report.k_density_coverage = k_density_coverage;
  report.n_fake = fake.rows();
  report.n_real = real.rows();
  return report;
}

}  // namespace latentscope
