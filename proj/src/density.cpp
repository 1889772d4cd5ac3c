#include "latentscope/density.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <string>

#include "latentscope/errors.hpp"
#include "latentscope/parallel.hpp"

namespace latentscope {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajorMatrix>;

// Training columns per Gram block. Fixed so that per-row reductions cross
// block boundaries at the same places regardless of thread count.
constexpr std::size_t kTrainBlock = 8192;

void check_inputs(const LatentMatrix& query, const LatentMatrix& train,
                  const DensityConfig& config) {
  if (query.dims() != train.dims()) {
    throw ValidationError("query dimensionality " + std::to_string(query.dims()) +
                          " does not match training dimensionality " +
                          std::to_string(train.dims()));
  }
  if (!(config.sigma > 0.0)) {
    throw ConfigError("sigma must be positive, got " + std::to_string(config.sigma));
  }
  if (config.chunk_rows < 1) {
    throw ConfigError("chunk_rows must be at least 1");
  }
}

}  // namespace

ScoreVector latent_density_reference(const LatentMatrix& query, const LatentMatrix& train,
                                     const DensityConfig& config) {
  check_inputs(query, train, config);
  const std::size_t nq = query.rows();
  const std::size_t nt = train.rows();
  const std::size_t d = query.dims();
  const double inv_two_sigma_sq = 1.0 / (2.0 * config.sigma * config.sigma);

  ScoreVector scores(nq);
  for (std::size_t g = 0; g < nq; ++g) {
    const double* q = query.data() + g * d;
    double sum = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      const double* z = train.data() + i * d;
      double dist_sq = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = q[c] - z[c];
        dist_sq += diff * diff;
      }
      sum += std::exp(-dist_sq * inv_two_sigma_sq);
    }
    scores[g] = sum / static_cast<double>(nt);
  }
  return scores;
}

ScoreVector latent_density(const LatentMatrix& query, const LatentMatrix& train,
                           const DensityConfig& config, const ProgressFn& progress) {
  check_inputs(query, train, config);
  const std::size_t nq = query.rows();
  const std::size_t nt = train.rows();
  const std::size_t d = query.dims();
  const double inv_two_sigma_sq = 1.0 / (2.0 * config.sigma * config.sigma);

  ConstMap query_map(query.data(), static_cast<Eigen::Index>(nq), static_cast<Eigen::Index>(d));
  ConstMap train_map(train.data(), static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(d));

  // Tiny query batches are latency-bound: the Gram route would stream the
  // training matrix twice (norms, then the product). One fused pass per row
  // halves the memory traffic and is the single-score fast path.
  if (nq <= 2) {
    ScoreVector scores(nq);
    for (std::size_t g = 0; g < nq; ++g) {
      const auto q = query_map.row(static_cast<Eigen::Index>(g));
      double sum = 0.0;
      for (std::size_t i = 0; i < nt; ++i) {
        const double dist_sq = (train_map.row(static_cast<Eigen::Index>(i)) - q).squaredNorm();
        sum += std::exp(-dist_sq * inv_two_sigma_sq);
      }
      scores[g] = sum / static_cast<double>(nt);
    }
    return scores;
  }

  const Eigen::VectorXd train_sq = train_map.rowwise().squaredNorm();
  const Eigen::VectorXd query_sq = query_map.rowwise().squaredNorm();

  ScoreVector scores(nq);
  const std::size_t chunk_rows = config.chunk_rows;
  const std::size_t n_chunks = (nq + chunk_rows - 1) / chunk_rows;
  std::atomic<std::size_t> rows_done{0};

  parallel_for(n_chunks, config.threads, [&](std::size_t chunk) {
    const std::size_t row_begin = chunk * chunk_rows;
    const std::size_t rows = std::min(chunk_rows, nq - row_begin);
    const auto q_block = query_map.middleRows(static_cast<Eigen::Index>(row_begin),
                                              static_cast<Eigen::Index>(rows));
    const auto q_sq = query_sq.segment(static_cast<Eigen::Index>(row_begin),
                                       static_cast<Eigen::Index>(rows));

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
    RowMajorMatrix gram;
    for (std::size_t col_begin = 0; col_begin < nt; col_begin += kTrainBlock) {
      const std::size_t cols = std::min(kTrainBlock, nt - col_begin);
      const auto t_block = train_map.middleRows(static_cast<Eigen::Index>(col_begin),
                                                static_cast<Eigen::Index>(cols));
      gram.noalias() = q_block * t_block.transpose();
      // dist^2 = |q|^2 + |z|^2 - 2 q.z, clamped at 0 against cancellation.
      auto dist_sq = ((-2.0) * gram).colwise() + q_sq;
      auto kernel = ((dist_sq.rowwise() +
                      train_sq.segment(static_cast<Eigen::Index>(col_begin),
                                       static_cast<Eigen::Index>(cols))
                          .transpose())
                         .array()
                         .max(0.0) *
                     (-inv_two_sigma_sq))
                        .exp();
      acc += kernel.matrix().rowwise().sum();
    }
    for (std::size_t r = 0; r < rows; ++r) {
      scores[row_begin + r] = acc[static_cast<Eigen::Index>(r)] / static_cast<double>(nt);
    }
    if (progress) progress(rows_done.fetch_add(rows) + rows, nq);
  });
  return scores;
}

std::vector<ScoreVector> sigma_sweep(const LatentMatrix& query, const LatentMatrix& train,
                                     const std::vector<double>& sigmas,
                                     const DensityConfig& base_config) {
  if (sigmas.empty()) throw ConfigError("sigma sweep needs at least one sigma");
  for (const double s : sigmas) {
    if (!(s > 0.0)) throw ConfigError("sigma must be positive, got " + std::to_string(s));
  }
  std::vector<ScoreVector> columns;
  columns.reserve(sigmas.size());
  for (const double s : sigmas) {
    DensityConfig config = base_config;
    config.sigma = s;
    columns.push_back(latent_density(query, train, config));
  }
  return columns;
}

}  // namespace latentscope
