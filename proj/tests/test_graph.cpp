#include <random>

#include "doctest.h"
#include "feathom/error.hpp"
#include "feathom/graph.hpp"
#include "fixtures.hpp"
#include "json.hpp"

using namespace feathom;

namespace {

FeaturedSeries plain(const std::vector<std::string>& values) {
  FeaturedSeries s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.base.timestamps.push_back(std::to_string(i));
    s.base.values.push_back(values[i]);
    s.feat0.emplace_back();
    s.feat1.emplace_back();
  }
  return s;
}

}  // namespace

TEST_CASE("pentagon skeleton") {
  const auto sk = build_skeleton(fixtures::pentagon());
  CHECK(sk.vertices == std::vector<std::string>{"21", "22", "23", "24", "25"});
  REQUIRE(sk.edges.size() == 5);
  CHECK(sk.edge_freq == std::vector<std::int64_t>{6, 6, 6, 6, 2});
  CHECK(sk.edges[4] == Edge{0, 4});
  CHECK(sk.connected());
}

TEST_CASE("direction-agnostic counting and degenerate series") {
  const auto sk = build_skeleton(plain({"a", "b", "a", "b"}));
  CHECK(sk.vertices.size() == 2);
  CHECK(sk.edge_freq == std::vector<std::int64_t>{3});

  const auto single = build_skeleton(plain({"a", "a", "a"}));
  CHECK(single.vertices.size() == 1);
  CHECK(single.edges.empty());

  CHECK_THROWS_AS(build_skeleton(plain({"a"})), InputError);
}

TEST_CASE("pentagon count matrices") {
  const auto s = fixtures::pentagon();
  const auto sk = build_skeleton(s);
  const auto cm = count_matrices(s, sk);
  REQUIRE(cm.c1.rows() == 5);
  REQUIRE(cm.c1.cols() == 3);
  const std::vector<std::vector<std::int64_t>> expected = {{0, 6, 0}, {0, 6, 0}, {0, 6, 0}, {0, 6, 0}, {0, 0, 2}};
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(cm.c1(i, j) == expected[i][j]);
  CHECK(counts_consistent(cm, sk));
  // Column sums of c0 equal occurrence counts of each vertex.
  CHECK(cm.c0.row_sum(0) == 5);  // 21 appears five times
}

TEST_CASE("multi-feature timestamp and empty-feature identity") {
  auto s = plain({"x", "y"});
  s.schema = FeatureSet({"H", "L"}, {"1"});
  s.feat0[0] = {0, 1};
  const auto sk = build_skeleton(s);
  const auto cm = count_matrices(s, sk);
  CHECK(cm.c0(0, 0) == 0);
  CHECK(cm.c0(0, 1) == 1);
  CHECK(cm.c0(0, 2) == 1);
  CHECK(cm.c0(1, 0) == 1);

  auto e = plain({"a", "b", "c", "a", "b"});
  const auto esk = build_skeleton(e);
  const auto ecm = count_matrices(e, esk);
  for (std::size_t i = 0; i < esk.edges.size(); ++i) CHECK(ecm.c1(i, 0) == esk.edge_freq[i]);
  CHECK(ecm.c0(0, 0) == 2);
}

TEST_CASE("pentagon weights") {
  const auto s = fixtures::pentagon();
  const auto wg = build_weighted_graph(s, fixtures::pentagon_featured_g());
  CHECK(wg.edge_weight == std::vector<double>{6, 6, 6, 6, 12});
  CHECK(wg.vertex_weight == std::vector<double>(5, 0.0));

  const auto zero = build_weighted_graph(s, InfluenceVector(s.schema));
  for (std::size_t i = 0; i < 5; ++i) CHECK(zero.edge_weight[i] == zero.skeleton.edge_freq[i]);
}

TEST_CASE("vertex weight is a dot product") {
  auto s = plain({"x", "x", "x", "x", "x", "x", "y"});
  s.schema = FeatureSet({"r1", "r2"}, {});
  // x row of c0 becomes (2, 3, 1).
  s.feat0 = {{}, {}, {0}, {0}, {0}, {1}, {}};
  const auto wg = build_weighted_graph(s, InfluenceVector({0, 1, 0}, {0}));
  CHECK(wg.vertex_weight[0] == 3.0);
}

TEST_CASE("weighted_graph rejects shape mismatch and dead edges") {
  const auto s = fixtures::pentagon();
  const auto sk = build_skeleton(s);
  auto cm = count_matrices(s, sk);
  CHECK_THROWS_AS(weighted_graph(sk, cm, InfluenceVector({0}, {0})), SchemaError);
  for (std::size_t j = 0; j < cm.c1.cols(); ++j) cm.c1(4, j) = 0;
  CHECK_THROWS_AS(weighted_graph(sk, cm, InfluenceVector(s.schema)), StructureError);
}

TEST_CASE("graph JSON dump") {
  const auto s = fixtures::pentagon();
  const auto sk = build_skeleton(s);
  const auto cm = count_matrices(s, sk);
  const auto doc = nlohmann::json::parse(graph_to_json(sk, cm));
  CHECK(doc["vertices"].size() == 5);
  CHECK(doc["c1"]["rows"] == 5);
  CHECK(doc["c1"]["data"].size() == 15);
}

TEST_CASE("property: zero influence gives raw frequencies") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = fixtures::random_series(rng);
    REQUIRE(at_most_one_first_feature(s));
    const auto wg = build_weighted_graph(s, InfluenceVector(s.schema));
    for (std::size_t i = 0; i < wg.skeleton.edges.size(); ++i)
      CHECK(wg.edge_weight[i] == static_cast<double>(wg.skeleton.edge_freq[i]));
    const auto cm = count_matrices(s, wg.skeleton);
    CHECK(counts_consistent(cm, wg.skeleton));
  }
}

TEST_CASE("property: edge weights monotone in g1 and vertex weights linear in g0") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = fixtures::random_series(rng);
    const auto sk = build_skeleton(s);
    const auto cm = count_matrices(s, sk);
    const auto g = fixtures::random_influence(rng, s.schema);
    auto bumped = g;
    const std::size_t col = trial % g.g1().size();
    bumped.set_g1(col, g.g1()[col] + u(rng));
    const auto w1 = weighted_graph(sk, cm, g), w2 = weighted_graph(sk, cm, bumped);
    for (std::size_t i = 0; i < sk.edges.size(); ++i) CHECK(w2.edge_weight[i] >= w1.edge_weight[i]);

    const auto h = fixtures::random_influence(rng, s.schema);
    const double a = u(rng), b = u(rng);
    std::vector<double> mix(g.g0().size());
    for (std::size_t j = 0; j < mix.size(); ++j) mix[j] = a * g.g0()[j] + b * h.g0()[j];
    const auto wg = weighted_graph(sk, cm, g), wh = weighted_graph(sk, cm, h);
    const auto wm = weighted_graph(sk, cm, InfluenceVector(mix, g.g1()));
    for (std::size_t v = 0; v < sk.vertices.size(); ++v)
      CHECK(wm.vertex_weight[v] == doctest::Approx(a * wg.vertex_weight[v] + b * wh.vertex_weight[v]).epsilon(1e-12));
  }
}
