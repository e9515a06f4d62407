#include <cmath>
#include <random>

#include "doctest.h"
#include "feathom/error.hpp"
#include "feathom/graph.hpp"
#include "feathom/metric.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace feathom;

namespace {

constexpr double kTol = 1e-12;

WeightedGraph two_edge_graph(std::vector<double> vw, std::vector<double> ew) {
  WeightedGraph g;
  g.skeleton.vertices = {"a", "b", "c"};
  g.skeleton.edges = {{0, 1}, {1, 2}};
  g.skeleton.edge_freq = {1, 1};
  g.vertex_weight = std::move(vw);
  g.edge_weight = std::move(ew);
  return g;
}

}  // namespace

TEST_CASE("Lipschitz constants") {
  CHECK(gaussian_lipschitz() == doctest::Approx(std::sqrt(2.0) * std::exp(-0.5)).epsilon(kTol));
  CHECK(ActivationFn::gaussian_raw().lipschitz_k() == doctest::Approx(0.8577638849607068).epsilon(kTol));
  CHECK(ActivationFn::gaussian_auto(3.0).lipschitz_k() == doctest::Approx(1.7155277699214135).epsilon(kTol));
}

TEST_CASE("auto activation scale") {
  const auto zero = auto_activation(two_edge_graph({0, 0, 0}, {1, 1}));
  CHECK(zero.scale() == 0.0);
  CHECK(zero(0.0) == 0.0);
  CHECK(zero(0.5) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(kTol));

  const auto nine = auto_activation(two_edge_graph({4, 5, 1}, {1, 1}));
  CHECK(nine.scale() == 9.0);
  CHECK(nine(5.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(kTol));
  CHECK(nine(5.0) == doctest::Approx(0.6321).epsilon(1e-4));
  CHECK(nine(-2.0) == 0.0);
}

TEST_CASE("custom table activation") {
  const auto t = ActivationFn::custom_table({{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.5}, {3.0, 0.9}});
  CHECK(t(0.5) == doctest::Approx(0.25));
  CHECK(t(10.0) == doctest::Approx(0.9));
  CHECK(t.lipschitz_k() == doctest::Approx(0.5));
  CHECK_THROWS(ActivationFn::custom_table({{0.0, 0.0}, {1.0, 1.0}}));
  CHECK_THROWS(ActivationFn::custom_table({{0.0, 0.0}, {1.0, 0.5}, {2.0, 0.2}}));
  CHECK_THROWS(ActivationFn::custom_table({{1.0, 0.5}}));
}

TEST_CASE("edge lengths") {
  const auto s = fixtures::pentagon();
  const auto wg = build_weighted_graph(s, fixtures::pentagon_featured_g());
  const auto rho = auto_activation(wg);
  const auto len = edge_lengths(wg, rho);
  for (int i = 0; i < 4; ++i) CHECK(len[i] == doctest::Approx(1.0 / 6).epsilon(kTol));
  CHECK(len[4] == doctest::Approx(1.0 / 12).epsilon(kTol));

  const auto plain = build_weighted_graph(s, InfluenceVector(s.schema));
  const auto plain_len = edge_lengths(plain, auto_activation(plain));
  for (std::size_t i = 0; i < 5; ++i) CHECK(plain_len[i] == doctest::Approx(1.0 / plain.skeleton.edge_freq[i]).epsilon(kTol));

  const auto tiny = two_edge_graph({0, 0, 0}, {2, 4});
  CHECK(min_reciprocal_weight(tiny) == 0.25);
  CHECK(edge_length(tiny, ActivationFn::gaussian_raw(), 0) == 0.5);
  CHECK(edge_length(tiny, ActivationFn::gaussian_raw(), 1) == 0.25);
}

TEST_CASE("pentagon distances against path enumeration") {
  const auto s = fixtures::pentagon();
  for (bool featured : {false, true}) {
    const auto g = featured ? fixtures::pentagon_featured_g() : InfluenceVector(s.schema);
    const auto wg = build_weighted_graph(s, g);
    const auto rho = auto_activation(wg);
    const auto d = distance_matrix(wg, rho);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : wg.skeleton.edges) edges.emplace_back(e.a, e.b);
    const auto ref = oracle::enumerate_paths(5, edges, edge_lengths(wg, rho));
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) CHECK(d(i, j) == doctest::Approx(ref[i][j]).epsilon(kTol));
  }
}

TEST_CASE("pentagon distance values") {
  const auto s = fixtures::pentagon();
  // Vertex order: 21, 22, 23, 24, 25.
  const auto plain = build_weighted_graph(s, InfluenceVector(s.schema));
  const auto d = distance_matrix(plain, auto_activation(plain));
  CHECK(d(0, 1) == doctest::Approx(1.0 / 6).epsilon(kTol));
  CHECK(d(0, 2) == doctest::Approx(1.0 / 3).epsilon(kTol));
  CHECK(d(0, 3) == doctest::Approx(1.0 / 2).epsilon(kTol));
  CHECK(d(0, 4) == doctest::Approx(1.0 / 2).epsilon(kTol));
  CHECK(d(2, 4) == doctest::Approx(1.0 / 3).epsilon(kTol));

  const auto feat = build_weighted_graph(s, fixtures::pentagon_featured_g());
  const auto df = distance_matrix(feat, auto_activation(feat));
  CHECK(std::abs(df(0, 4) - 1.0 / 12) <= kTol);
  CHECK(std::abs(df(0, 3) - 1.0 / 4) <= kTol);
  CHECK(std::abs(df(1, 4) - 1.0 / 4) <= kTol);
  for (std::size_t i = 0; i < 5; ++i) CHECK(df(i, i) == 0.0);
}

TEST_CASE("disconnected skeleton is a structure error") {
  GraphSkeleton sk;
  sk.vertices = {"a", "b", "c"};
  sk.edges = {{0, 1}};
  sk.edge_freq = {1};
  CHECK_THROWS_AS(shortest_path_matrix(sk, {1.0}), StructureError);
}

TEST_CASE("distance CSV") {
  const auto s = fixtures::pentagon();
  const auto wg = build_weighted_graph(s, fixtures::pentagon_featured_g());
  const auto csv = distance_matrix_to_csv(distance_matrix(wg, auto_activation(wg)));
  CHECK(csv.rfind("21,22,23,24,25\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}

TEST_CASE("property: zero influence reduces to the reciprocal-frequency metric") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = fixtures::random_series(rng);
    const auto wg = build_weighted_graph(s, InfluenceVector(s.schema));
    const auto d = distance_matrix(wg, auto_activation(wg));
    const auto ref = oracle::reciprocal_frequency_metric(s.base.values);
    REQUIRE(ref.labels == d.order);
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j) CHECK(std::abs(d(i, j) - ref.d[i][j]) <= kTol);
  }
}

TEST_CASE("property: metric axioms and length bounds under random influence") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = fixtures::random_series(rng);
    const auto wg = build_weighted_graph(s, fixtures::random_influence(rng, s.schema));
    const auto rho = auto_activation(wg);
    const double alpha = min_reciprocal_weight(wg);
    const auto len = edge_lengths(wg, rho);
    for (std::size_t e = 0; e < len.size(); ++e) {
      CHECK(len[e] > 0.0);
      CHECK(len[e] <= 1.0 / wg.edge_weight[e] + alpha);
    }
    const auto d = distance_matrix(wg, rho);
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(d(i, i) == 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(d(i, j) == d(j, i));
        if (i != j) CHECK(d(i, j) > 0.0);
        for (std::size_t k = 0; k < n; ++k) CHECK(d(i, j) <= d(i, k) + d(k, j) + 1e-9);
      }
    }
  }
}

TEST_CASE("property: auto activation on a dense grid") {
  for (double scale : {0.0, 1.0, 9.0, 250.0}) {
    const auto rho = ActivationFn::gaussian_auto(scale);
    const int n = 100000;
    double prev = rho(-10.0);
    for (int i = 1; i < n; ++i) {
      const double x0 = -10.0 + 20.0 * (i - 1) / (n - 1), x1 = -10.0 + 20.0 * i / (n - 1);
      const double y = rho(x1);
      CHECK(y >= 0.0);
      CHECK(y < 1.0);
      CHECK(y >= prev);
      CHECK(std::abs(y - prev) <= 1.7156 * (x1 - x0));
      prev = y;
    }
    CHECK(rho(0.0) == 0.0);
  }
}
