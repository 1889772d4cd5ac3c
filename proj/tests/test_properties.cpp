// Property suites over generated inputs. Each suite named in the module
// invariants runs at least 1000 cases.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "latentscope/analysis.hpp"
#include "latentscope/density.hpp"
#include "latentscope/embeddings_io.hpp"
#include "latentscope/manifold.hpp"
#include "test_util.hpp"

using namespace latentscope;
using testutil::Rng;

namespace {

DensityConfig cfg(double sigma, std::size_t chunk_rows = 32) {
  return DensityConfig{sigma, chunk_rows, 0};
}

LatentMatrix permuted_rows(const LatentMatrix& m, Rng& rng) {
  std::vector<std::size_t> perm(m.rows());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.index(i)]);
  }
  std::vector<double> values;
  values.reserve(m.values().size());
  for (const std::size_t r : perm) {
    const auto row = m.row(r);
    values.insert(values.end(), row.begin(), row.end());
  }
  return LatentMatrix(m.rows(), m.dims(), std::move(values));
}

// Random isometry: a product of Givens rotations plus a translation.
struct Isometry {
  std::vector<std::array<double, 2>> angles;  // cos, sin per rotation
  std::vector<std::array<std::size_t, 2>> planes;
  std::vector<double> shift;

  static Isometry random(Rng& rng, std::size_t dims) {
    Isometry iso;
    iso.shift.resize(dims);
    for (double& s : iso.shift) s = rng.uniform(-5.0, 5.0);
    if (dims >= 2) {
      const std::size_t n_rot = 1 + rng.index(2 * dims);
      for (std::size_t r = 0; r < n_rot; ++r) {
        std::size_t i = rng.index(dims);
        std::size_t j = rng.index(dims - 1);
        if (j >= i) ++j;
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        iso.planes.push_back({i, j});
        iso.angles.push_back({std::cos(theta), std::sin(theta)});
      }
    }
    return iso;
  }

  LatentMatrix apply(const LatentMatrix& m) const {
    std::vector<double> values = m.values();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      double* row = values.data() + r * m.dims();
      for (std::size_t g = 0; g < planes.size(); ++g) {
        const auto [i, j] = planes[g];
        const auto [c, s] = angles[g];
        const double a = row[i], b = row[j];
        row[i] = c * a - s * b;
        row[j] = s * a + c * b;
      }
      for (std::size_t d = 0; d < m.dims(); ++d) row[d] += shift[d];
    }
    return LatentMatrix(m.rows(), m.dims(), std::move(values));
  }
};

}  // namespace

TEST_CASE("density scores lie in (0,1], equal to 1 iff all train codes equal the query") {
  Rng rng(1001);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t dims = 1 + rng.index(6);
    const std::size_t nt = 1 + rng.index(24);
    const double sigma = rng.uniform(0.3, 30.0);
    const bool degenerate = rng.uniform() < 0.25;

    const LatentMatrix query = testutil::random_matrix(rng, 1, dims, 2.0);
    LatentMatrix train = degenerate
                             ? LatentMatrix(nt, dims, [&] {
                                 std::vector<double> v;
                                 for (std::size_t i = 0; i < nt; ++i) {
                                   v.insert(v.end(), query.row(0).begin(), query.row(0).end());
                                 }
                                 return v;
                               }())
                             : testutil::random_matrix(rng, nt, dims, 2.0);

    const double score = latent_density(query, train, cfg(sigma))[0];
    REQUIRE(score >= 0.0);
    REQUIRE(score <= 1.0);
    if (score == 0.0) {
      // Exact zero is legal only when every kernel term underflows
      // (exp(-x) flushes to 0 near x ~ 745).
      const double inv = 1.0 / (2.0 * sigma * sigma);
      double min_exponent = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < nt; ++i) {
        double dist_sq = 0.0;
        for (std::size_t c = 0; c < dims; ++c) {
          const double diff = query.at(0, c) - train.at(i, c);
          dist_sq += diff * diff;
        }
        min_exponent = std::min(min_exponent, dist_sq * inv);
      }
      REQUIRE(min_exponent > 700.0);
    }
    if (degenerate) {
      REQUIRE(score == 1.0);
    } else {
      REQUIRE(score < 1.0);
    }
  }
}

TEST_CASE("permuting training rows changes scores by at most 1e-12 relative") {
  Rng rng(1002);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t dims = 1 + rng.index(6);
    const std::size_t nq = 1 + rng.index(8);
    const std::size_t nt = 2 + rng.index(30);
    const double sigma = rng.uniform(0.5, 25.0);
    const LatentMatrix query = testutil::random_matrix(rng, nq, dims, 2.0);
    const LatentMatrix train = testutil::random_matrix(rng, nt, dims, 2.0);
    const auto a = latent_density(query, train, cfg(sigma));
    const auto b = latent_density(query, permuted_rows(train, rng), cfg(sigma));
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(testutil::rel_diff(a[i], b[i]) <= 1e-12);
    }
  }
}

TEST_CASE("a common isometry leaves density scores unchanged within 1e-9") {
  Rng rng(1003);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t dims = 2 + rng.index(5);
    const std::size_t nq = 1 + rng.index(6);
    const std::size_t nt = 1 + rng.index(20);
    const double sigma = rng.uniform(0.5, 25.0);
    const LatentMatrix query = testutil::random_matrix(rng, nq, dims, 2.0);
    const LatentMatrix train = testutil::random_matrix(rng, nt, dims, 2.0);
    const Isometry iso = Isometry::random(rng, dims);
    const auto a = latent_density(query, train, cfg(sigma));
    const auto b = latent_density(iso.apply(query), iso.apply(train), cfg(sigma));
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(testutil::rel_diff(a[i], b[i]) <= 1e-9);
    }
  }
}

TEST_CASE("each score is non-decreasing in sigma") {
  Rng rng(1004);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t dims = 1 + rng.index(6);
    const std::size_t nq = 1 + rng.index(6);
    const std::size_t nt = 1 + rng.index(24);
    double s1 = rng.uniform(0.2, 30.0);
    double s2 = rng.uniform(0.2, 30.0);
    if (s1 > s2) std::swap(s1, s2);
    const LatentMatrix query = testutil::random_matrix(rng, nq, dims, 2.0);
    const LatentMatrix train = testutil::random_matrix(rng, nt, dims, 2.0);
    const auto low = latent_density(query, train, cfg(s1));
    const auto high = latent_density(query, train, cfg(s2));
    for (std::size_t i = 0; i < low.size(); ++i) {
      REQUIRE(high[i] >= low[i]);
    }
  }
}

TEST_CASE("fast path equals the reference path within 1e-10 relative") {
  Rng rng(1005);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t dims = 1 + rng.index(8);
    const std::size_t nq = 1 + rng.index(10);
    const std::size_t nt = 1 + rng.index(40);
    const double sigma = rng.uniform(0.5, 25.0);
    const LatentMatrix query = testutil::random_matrix(rng, nq, dims, 2.0, rng.uniform(-2, 2));
    const LatentMatrix train = testutil::random_matrix(rng, nt, dims, 2.0, rng.uniform(-2, 2));
    const auto fast = latent_density(query, train, cfg(sigma, 1 + rng.index(8)));
    const auto ref = latent_density_reference(query, train, cfg(sigma));
    for (std::size_t i = 0; i < fast.size(); ++i) {
      REQUIRE(testutil::rel_diff(fast[i], ref[i]) <= 1e-10);
    }
  }
}

TEST_CASE("scaling both sets by c scales radii and rarity, fixes the dimensionless metrics") {
  Rng rng(1006);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t dims = 1 + rng.index(4);
    const std::size_t n_real = 4 + rng.index(20);
    const std::size_t n_fake = 4 + rng.index(16);
    const std::size_t k = 1 + rng.index(3);
    const double c = std::exp(rng.uniform(-3.0, 3.0));
    const LatentMatrix real = testutil::random_matrix(rng, n_real, dims, 1.5);
    const LatentMatrix fake = testutil::random_matrix(rng, n_fake, dims, 1.5);

    auto scaled = [&](const LatentMatrix& m) {
      std::vector<double> v = m.values();
      for (double& x : v) x *= c;
      return LatentMatrix(m.rows(), m.dims(), std::move(v));
    };
    const LatentMatrix real_s = scaled(real);
    const LatentMatrix fake_s = scaled(fake);

    const auto index = build_manifold(real, k);
    const auto index_s = build_manifold(real_s, k);
    for (std::size_t j = 0; j < n_real; ++j) {
      REQUIRE(testutil::rel_diff(index_s.radii[j], c * index.radii[j]) <= 1e-9);
    }

    const auto pr = precision_recall(fake, real, k);
    const auto pr_s = precision_recall(fake_s, real_s, k);
    REQUIRE(pr.first == pr_s.first);
    REQUIRE(pr.second == pr_s.second);
    REQUIRE(pr.first >= 0.0);
    REQUIRE(pr.first <= 1.0);
    REQUIRE(pr.second >= 0.0);
    REQUIRE(pr.second <= 1.0);

    const auto dc = density_coverage(fake, real, k);
    const auto dc_s = density_coverage(fake_s, real_s, k);
    REQUIRE(testutil::rel_diff(dc.first, dc_s.first) <= 1e-9);
    REQUIRE(dc.second == dc_s.second);
    REQUIRE(dc.first >= 0.0);
    REQUIRE(dc.second >= 0.0);
    REQUIRE(dc.second <= 1.0);

    const auto rarity = rarity_scores(fake, index);
    const auto rarity_s = rarity_scores(fake_s, index_s);
    const auto realism = realism_scores(fake, index);
    const auto realism_s = realism_scores(fake_s, index_s);
    for (std::size_t g = 0; g < n_fake; ++g) {
      REQUIRE(rarity[g].has_value() == rarity_s[g].has_value());
      if (rarity[g]) REQUIRE(testutil::rel_diff(*rarity_s[g], c * *rarity[g]) <= 1e-9);
      if (std::isfinite(realism[g])) {
        REQUIRE(testutil::rel_diff(realism[g], realism_s[g]) <= 1e-9);
      } else {
        REQUIRE(realism[g] == realism_s[g]);
      }
    }
  }
}

TEST_CASE("realism >= 1, rarity defined, and precision containment are one predicate") {
  Rng rng(1007);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t dims = 1 + rng.index(4);
    const std::size_t n_real = 4 + rng.index(20);
    const std::size_t n_fake = 4 + rng.index(16);
    const std::size_t k = 1 + rng.index(3);
    LatentMatrix real = testutil::random_matrix(rng, n_real, dims, 1.2);
    std::vector<double> fake_values = testutil::random_matrix(rng, n_fake, dims, 1.5).values();

    // Inject exact coincidences so the boundary cases are exercised.
    if (rng.uniform() < 0.3) {
      const auto row = real.row(rng.index(n_real));
      std::copy(row.begin(), row.end(),
                fake_values.begin() + static_cast<std::ptrdiff_t>(rng.index(n_fake) * dims));
    }
    const LatentMatrix fake(n_fake, dims, std::move(fake_values));

    const auto index = build_manifold(real, k);
    const auto realism = realism_scores(fake, index);
    const auto rarity = rarity_scores(fake, index);

    std::size_t on_manifold = 0;
    for (std::size_t g = 0; g < n_fake; ++g) {
      const bool realistic = realism[g] >= 1.0;
      REQUIRE(rarity[g].has_value() == realistic);
      on_manifold += realistic;
    }
    const double precision = precision_recall(fake, real, k).first;
    REQUIRE(precision ==
            static_cast<double>(on_manifold) / static_cast<double>(n_fake));
  }
}

TEST_CASE("ranking is deterministic and invariant to positive affine score maps") {
  Rng rng(1008);
  const double powers[] = {0.25, 0.5, 2.0, 4.0, 8.0};
  for (int round = 0; round < 1000; ++round) {
    const std::size_t n = 1 + rng.index(40);
    // Lattice scores (multiples of 1/16) make the affine map exact in
    // floating point, so tie structure is preserved bit-for-bit.
    ScoreVector scores(n);
    for (double& s : scores) s = static_cast<double>(rng.index(64)) / 16.0;

    const Ranking base = rank_by_score(scores);
    REQUIRE(rank_by_score(scores).order == base.order);

    for (std::size_t i = 1; i < base.order.size(); ++i) {
      const double prev = scores[base.order[i - 1]];
      const double curr = scores[base.order[i]];
      REQUIRE(prev >= curr);
      if (prev == curr) REQUIRE(base.order[i - 1] < base.order[i]);
    }

    const double c = powers[rng.index(5)];
    const double shift = static_cast<double>(rng.index(32)) / 16.0;
    ScoreVector mapped(n);
    for (std::size_t i = 0; i < n; ++i) mapped[i] = c * scores[i] + shift;
    REQUIRE(rank_by_score(mapped).order == base.order);
  }
}

TEST_CASE("save/load round trip is the identity for every format") {
  Rng rng(1009);
  testutil::TempDir dir("prop_roundtrip");
  for (int round = 0; round < 150; ++round) {
    const std::size_t rows = 1 + rng.index(12);
    const std::size_t dims = 1 + rng.index(10);
    const LatentMatrix m = testutil::random_matrix(rng, rows, dims, 10.0);

    const EmbeddingFormat formats[] = {
        {FormatKind::Npy, ElementWidth::F64, 0},
        {FormatKind::Csv, ElementWidth::F64, 0},
        {FormatKind::RawBinary, ElementWidth::F64, dims},
        {FormatKind::Npy, ElementWidth::F32, 0},
        {FormatKind::RawBinary, ElementWidth::F32, dims},
    };
    for (const auto& format : formats) {
      const auto path = dir.file("m.bin");
      save_embeddings(m, path, format);
      const LatentMatrix back = load_embeddings(path, format);
      REQUIRE(back.rows() == rows);
      REQUIRE(back.dims() == dims);
      if (format.width == ElementWidth::F64) {
        REQUIRE(back.values() == m.values());
      } else {
        for (std::size_t i = 0; i < m.values().size(); ++i) {
          REQUIRE(back.values()[i] ==
                  static_cast<double>(static_cast<float>(m.values()[i])));
        }
      }
    }
  }
}

TEST_CASE("flatten_grid is a bijection for every axis declaration") {
  Rng rng(1010);
  const char* orders[] = {"chw", "cwh", "hcw", "hwc", "wch", "whc"};
  for (int round = 0; round < 200; ++round) {
    const GridShape shape{1 + rng.index(4), 1 + rng.index(4), 1 + rng.index(4)};
    std::vector<double> block(shape.element_count());
    for (double& v : block) v = rng.normal();
    const std::string order = orders[rng.index(6)];
    const auto row = flatten_grid(block, shape, order);
    REQUIRE(unflatten_grid(row, shape, order) == block);

    // Bijection: distinct blocks map to distinct rows (the round trip above
    // plus linearity makes a collision impossible; spot-check one swap).
    if (block.size() >= 2) {
      std::vector<double> other = block;
      std::swap(other[0], other[block.size() - 1]);
      if (other != block) REQUIRE(flatten_grid(other, shape, order) != row);
    }
  }
}
