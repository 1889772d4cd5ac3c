#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace latentscope {

// Dense row-major set of latent codes: rows are samples, columns are latent
// dimensions. Values are checked to be finite on construction and the matrix
// is immutable afterwards, so instances can be shared freely across threads.
class LatentMatrix {
public:
  LatentMatrix(std::size_t n_rows, std::size_t n_dims, std::vector<double> values);

  std::size_t rows() const { return n_rows_; }
  std::size_t dims() const { return n_dims_; }

  double at(std::size_t row, std::size_t col) const {
    return values_[row * n_dims_ + col];
  }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * n_dims_, n_dims_};
  }

  const std::vector<double>& values() const { return values_; }
  const double* data() const { return values_.data(); }

private:
  std::size_t n_rows_;
  std::size_t n_dims_;
  std::vector<double> values_;
};

// Extents of a channel x height x width latent block (LDM-style 2-D latents
// plus their channel axis).
struct GridShape {
  std::size_t channels = 1;
  std::size_t height = 1;
  std::size_t width = 1;

  std::size_t element_count() const { return channels * height * width; }
};

// Reorders a latent block, laid out according to `axis_order` (a permutation
// of the letters 'c', 'h', 'w', outermost axis first), into one flat row in
// the canonical order: channel-major, then row, then column ("chw"). The
// canonical order is a project convention; density scores only require that
// training and query codes are flattened identically.
std::vector<double> flatten_grid(std::span<const double> block, const GridShape& shape,
                                 const std::string& axis_order);

// Inverse of flatten_grid: spreads a canonical row back into a block laid out
// according to `axis_order`.
std::vector<double> unflatten_grid(std::span<const double> row, const GridShape& shape,
                                   const std::string& axis_order);

}  // namespace latentscope
