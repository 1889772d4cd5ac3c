#include "latentscope/latent_matrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "latentscope/errors.hpp"

namespace latentscope {

LatentMatrix::LatentMatrix(std::size_t n_rows, std::size_t n_dims, std::vector<double> values)
    : n_rows_(n_rows), n_dims_(n_dims), values_(std::move(values)) {
  if (n_rows_ < 1 || n_dims_ < 1) {
    throw ValidationError("latent matrix must have at least one row and one dimension (got " +
                          std::to_string(n_rows_) + " x " + std::to_string(n_dims_) + ")");
  }
  if (values_.size() != n_rows_ * n_dims_) {
    throw ValidationError("latent matrix value count " + std::to_string(values_.size()) +
                          " does not match shape " + std::to_string(n_rows_) + " x " +
                          std::to_string(n_dims_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ValidationError("non-finite value in latent matrix at row " +
                            std::to_string(i / n_dims_) + ", column " +
                            std::to_string(i % n_dims_));
    }
  }
}

namespace {

// Maps "hwc" etc. to the position of each of c/h/w in the declared layout.
std::array<std::size_t, 3> parse_axis_order(const std::string& axis_order) {
  if (axis_order.size() != 3) {
    throw ValidationError("axis order must be a permutation of \"chw\", got \"" + axis_order +
                          "\"");
  }
  std::array<std::size_t, 3> pos{};  // pos[0]=c, pos[1]=h, pos[2]=w
  std::array<bool, 3> seen{};
  for (std::size_t i = 0; i < 3; ++i) {
    const char a = axis_order[i];
    const std::size_t axis = a == 'c' ? 0 : a == 'h' ? 1 : a == 'w' ? 2 : 3;
    if (axis == 3 || seen[axis]) {
      throw ValidationError("axis order must be a permutation of \"chw\", got \"" + axis_order +
                            "\"");
    }
    seen[axis] = true;
    pos[axis] = i;
  }
  return pos;
}

}  // namespace

std::vector<double> flatten_grid(std::span<const double> block, const GridShape& shape,
                                 const std::string& axis_order) {
  const auto pos = parse_axis_order(axis_order);
  if (shape.element_count() != block.size()) {
    throw ValidationError("grid shape " + std::to_string(shape.channels) + "x" +
                          std::to_string(shape.height) + "x" + std::to_string(shape.width) +
                          " declares " + std::to_string(shape.element_count()) +
                          " elements but block has " + std::to_string(block.size()));
  }

  const std::size_t extent[3] = {shape.channels, shape.height, shape.width};
  // Row-major strides of the declared layout, by axis (c, h, w).
  std::size_t stride[3];
  {
    std::size_t declared_extent[3];
    for (std::size_t axis = 0; axis < 3; ++axis) declared_extent[pos[axis]] = extent[axis];
    std::size_t declared_stride[3];
    declared_stride[2] = 1;
    declared_stride[1] = declared_extent[2];
    declared_stride[0] = declared_extent[1] * declared_extent[2];
    for (std::size_t axis = 0; axis < 3; ++axis) stride[axis] = declared_stride[pos[axis]];
  }

  std::vector<double> row(block.size());
  std::size_t out = 0;
  for (std::size_t c = 0; c < extent[0]; ++c)
    for (std::size_t h = 0; h < extent[1]; ++h)
      for (std::size_t w = 0; w < extent[2]; ++w)
        row[out++] = block[c * stride[0] + h * stride[1] + w * stride[2]];
  return row;
}

std::vector<double> unflatten_grid(std::span<const double> row, const GridShape& shape,
                                   const std::string& axis_order) {
  const auto pos = parse_axis_order(axis_order);
  if (shape.element_count() != row.size()) {
    throw ValidationError("grid shape declares " + std::to_string(shape.element_count()) +
                          " elements but row has " + std::to_string(row.size()));
  }

  const std::size_t extent[3] = {shape.channels, shape.height, shape.width};
  std::size_t stride[3];
  {
    std::size_t declared_extent[3];
    for (std::size_t axis = 0; axis < 3; ++axis) declared_extent[pos[axis]] = extent[axis];
    std::size_t declared_stride[3];
    declared_stride[2] = 1;
    declared_stride[1] = declared_extent[2];
    declared_stride[0] = declared_extent[1] * declared_extent[2];
    for (std::size_t axis = 0; axis < 3; ++axis) stride[axis] = declared_stride[pos[axis]];
  }

  std::vector<double> block(row.size());
  std::size_t in = 0;
  for (std::size_t c = 0; c < extent[0]; ++c)
    for (std::size_t h = 0; h < extent[1]; ++h)
      for (std::size_t w = 0; w < extent[2]; ++w)
        block[c * stride[0] + h * stride[1] + w * stride[2]] = row[in++];
  return block;
}

}  // namespace latentscope
