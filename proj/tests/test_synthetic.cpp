#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latentscope/analysis.hpp"
#include "latentscope/errors.hpp"
#include "latentscope/rng.hpp"
#include "latentscope/synthetic.hpp"
#include "test_util.hpp"

using namespace latentscope;

namespace {

MixtureModel standard_normal_1d() {
  MixtureModel model;
  model.n_dims = 1;
  model.seed = 1;
  model.components.push_back({1.0, {0.0}, 1.0});
  return model;
}

}  // namespace

TEST_CASE("generator stream matches the documented algorithm") {
  // Golden values from an independent implementation of splitmix64 +
  // xoshiro256++ + Box-Muller.
  Xoshiro256PlusPlus gen(42);
  CHECK(gen.next() == 15021278609987233951ull);

  Xoshiro256PlusPlus gen2(42);
  CHECK(gen2.next_double() == doctest::Approx(0.8143051451229099).epsilon(1e-15));

  MixtureModel model;
  model.n_dims = 2;
  model.seed = 7;
  model.components.push_back({1.0, {0.0, 0.0}, 1.0});
  const LatentMatrix draws = sample_mixture(model, 2, 7);
  CHECK(draws.at(0, 0) == doctest::Approx(-0.12435027897482133).epsilon(1e-14));
  CHECK(draws.at(0, 1) == doctest::Approx(-0.6019145442290162).epsilon(1e-14));
  CHECK(draws.at(1, 0) == doctest::Approx(-2.515258995020244).epsilon(1e-14));
  CHECK(draws.at(1, 1) == doctest::Approx(0.5505618099131477).epsilon(1e-14));
}

TEST_CASE("sampling") {
  SUBCASE("same (model, seed) twice gives identical matrices") {
    MixtureModel model;
    model.n_dims = 3;
    model.seed = 11;
    model.components.push_back({0.5, {0, 0, 0}, 1.0});
    model.components.push_back({0.5, {5, 5, 5}, 2.0});
    const LatentMatrix a = sample_mixture(model, 200, 11);
    const LatentMatrix b = sample_mixture(model, 200, 11);
    CHECK(a.values() == b.values());
    const LatentMatrix c = sample_mixture(model, 200, 12);
    CHECK(a.values() != c.values());
  }

  SUBCASE("degenerate stddev collapses to the mean") {
    MixtureModel model;
    model.n_dims = 2;
    model.seed = 3;
    model.components.push_back({1.0, {4.0, -1.0}, 1e-12});
    const LatentMatrix draws = sample_mixture(model, 50, 3);
    for (std::size_t r = 0; r < draws.rows(); ++r) {
      CHECK(std::abs(draws.at(r, 0) - 4.0) <= 1e-9);
      CHECK(std::abs(draws.at(r, 1) + 1.0) <= 1e-9);
    }
  }

  SUBCASE("empirical mean of 1e5 draws is close to the component mean") {
    // standard error is sigma/sqrt(n) ~ 0.0032; assert within 0.02
    const MixtureModel model = standard_normal_1d();
    const LatentMatrix draws = sample_mixture(model, 100000, 5);
    double sum = 0;
    for (const double v : draws.values()) sum += v;
    CHECK(std::abs(sum / 100000.0) <= 0.02);
  }

  SUBCASE("component weights steer the draw frequencies") {
    MixtureModel model;
    model.n_dims = 1;
    model.seed = 9;
    model.components.push_back({0.9, {0.0}, 0.1});
    model.components.push_back({0.1, {100.0}, 0.1});
    const LatentMatrix draws = sample_mixture(model, 10000, 9);
    std::size_t high = 0;
    for (const double v : draws.values()) high += v > 50.0;
    CHECK(high > 800);
    CHECK(high < 1200);
  }
}

TEST_CASE("pdf") {
  SUBCASE("1-D standard normal at 0 is 1/sqrt(2 pi)") {
    const MixtureModel model = standard_normal_1d();
    CHECK(pdf(model, std::vector<double>{0.0}) ==
          doctest::Approx(0.3989422804014327).epsilon(1e-12));
  }

  SUBCASE("far point underflows to 0") {
    const MixtureModel model = standard_normal_1d();
    CHECK(pdf(model, std::vector<double>{1e6}) == 0.0);
  }

  SUBCASE("two equal-weight identical components equal one component") {
    MixtureModel one;
    one.n_dims = 2;
    one.seed = 0;
    one.components.push_back({1.0, {1.0, -1.0}, 0.7});
    MixtureModel two = one;
    two.components[0].weight = 0.5;
    two.components.push_back(two.components[0]);
    for (double x = -3; x <= 3; x += 0.5) {
      for (double y = -3; y <= 3; y += 0.5) {
        const std::vector<double> p{x, y};
        CHECK(pdf(one, p) == doctest::Approx(pdf(two, p)).epsilon(1e-12));
      }
    }
  }

  SUBCASE("invariant under component permutation") {
    MixtureModel model;
    model.n_dims = 1;
    model.seed = 0;
    model.components.push_back({0.25, {0.0}, 1.0});
    model.components.push_back({0.75, {2.0}, 0.5});
    MixtureModel flipped = model;
    std::swap(flipped.components[0], flipped.components[1]);
    for (double x = -4; x <= 6; x += 0.25) {
      CHECK(pdf(model, std::vector<double>{x}) ==
            doctest::Approx(pdf(flipped, std::vector<double>{x})).epsilon(1e-14));
    }
  }

  SUBCASE("1-D grid quadrature integrates to 1 within 1e-3") {
    MixtureModel model;
    model.n_dims = 1;
    model.seed = 0;
    model.components.push_back({0.6, {-2.0}, 0.5});
    model.components.push_back({0.4, {3.0}, 1.5});
    const double lo = -12.0, hi = 15.0, step = 0.01;
    double integral = 0.0;
    for (double x = lo; x <= hi; x += step) {
      integral += pdf(model, std::vector<double>{x}) * step;
    }
    CHECK(std::abs(integral - 1.0) <= 1e-3);
  }

  SUBCASE("dimension mismatch") {
    const MixtureModel model = standard_normal_1d();
    CHECK_THROWS_AS(pdf(model, std::vector<double>{0.0, 1.0}), ValidationError);
  }
}

TEST_CASE("quality_proxy") {
  MixtureModel model;
  model.n_dims = 2;
  model.seed = 0;
  model.components.push_back({0.7, {0.0, 0.0}, 1.0});
  model.components.push_back({0.3, {10.0, 0.0}, 1.0});

  SUBCASE("codes at component means rank above codes 3 stddevs out") {
    const LatentMatrix codes(4, 2, {0, 0, 10, 0, 3, 0, 10, 3});
    const ScoreVector q = quality_proxy(model, codes);
    CHECK(q[0] > q[2]);
    CHECK(q[1] > q[3]);
    CHECK(q[0] > q[1]);  // heavier component wins at equal radius
  }

  SUBCASE("single component: ranking equals reversed distance-to-mean") {
    const MixtureModel single = standard_normal_1d();
    const LatentMatrix codes(5, 1, {0.1, -2.0, 0.7, 3.0, -0.4});
    const ScoreVector q = quality_proxy(single, codes);
    ScoreVector neg_dist(5);
    for (std::size_t i = 0; i < 5; ++i) neg_dist[i] = -std::abs(codes.at(i, 0));
    CHECK(rank_by_score(q).order == rank_by_score(neg_dist).order);
  }
}

TEST_CASE("mixture JSON") {
  SUBCASE("round trip") {
    MixtureModel model;
    model.n_dims = 2;
    model.seed = 42;
    model.components.push_back({0.6, {0.0, 0.0}, 1.0});
    model.components.push_back({0.4, {10.0, -1.5}, 2.0});
    const MixtureModel back = parse_mixture_json(mixture_to_json(model));
    CHECK(back.n_dims == model.n_dims);
    CHECK(back.seed == model.seed);
    REQUIRE(back.components.size() == 2);
    CHECK(back.components[1].mean == model.components[1].mean);
    CHECK(back.components[1].weight == 0.4);
  }

  SUBCASE("malformed document") {
    CHECK_THROWS_AS(parse_mixture_json("not json"), FormatError);
    CHECK_THROWS_AS(parse_mixture_json("{\"dims\": 2}"), FormatError);
  }

  SUBCASE("validation failures") {
    CHECK_THROWS_AS(parse_mixture_json(R"({"dims": 1, "seed": 0,
      "components": [{"weight": 0.5, "mean": [0], "stddev": 1}]})"),
                    ValidationError);  // weights sum to 0.5
    CHECK_THROWS_AS(parse_mixture_json(R"({"dims": 1, "seed": 0,
      "components": [{"weight": 1.0, "mean": [0, 1], "stddev": 1}]})"),
                    ValidationError);  // mean length mismatch
    CHECK_THROWS_AS(parse_mixture_json(R"({"dims": 1, "seed": 0,
      "components": [{"weight": 1.0, "mean": [0], "stddev": 0}]})"),
                    ValidationError);  // zero stddev
  }
}
