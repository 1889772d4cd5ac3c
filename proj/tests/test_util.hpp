#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "latentscope/latent_matrix.hpp"
#include "latentscope/rng.hpp"

namespace testutil {

// Deterministic test-data source on top of the library generator.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return gen_.next_double(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) {  // in [0, n)
    return static_cast<std::size_t>(gen_.next() % n);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto pair = latentscope::box_muller(uniform(), uniform());
    spare_ = pair.z1;
    have_spare_ = true;
    return pair.z0;
  }

private:
  latentscope::Xoshiro256PlusPlus gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline latentscope::LatentMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t dims,
                                               double scale = 1.0, double offset = 0.0) {
  std::vector<double> values(rows * dims);
  for (double& v : values) v = offset + scale * rng.normal();
  return latentscope::LatentMatrix(rows, dims, std::move(values));
}

inline double rel_diff(double a, double b) {
  const double denom = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / denom;
}

// Unique scratch directory per test binary run.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("latentscope_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline void write_bytes(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary);
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

inline std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
