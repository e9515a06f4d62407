#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "feathom/error.hpp"
#include "feathom/graph.hpp"
#include "feathom/metric.hpp"
#include "feathom/persistence.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace feathom;

namespace {

constexpr double kTol = 1e-12;

DistanceMatrix from_matrix(const oracle::Matrix& m) {
  DistanceMatrix d;
  for (std::size_t i = 0; i < m.size(); ++i) d.order.push_back("p" + std::to_string(i));
  for (const auto& row : m) d.values.insert(d.values.end(), row.begin(), row.end());
  return d;
}

oracle::Matrix to_matrix(const DistanceMatrix& d) {
  oracle::Matrix m(d.size(), std::vector<double>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) m[i][j] = d(i, j);
  return m;
}

oracle::Matrix random_euclidean(std::mt19937_64& rng, std::size_t n, bool integer_grid = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> grid(0, 3);
  std::vector<std::array<double, 3>> pts(n);
  for (auto& p : pts)
    for (auto& c : p) c = integer_grid ? grid(rng) : u(rng);
  oracle::Matrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double diff = pts[i][k] - pts[j][k];
        // L1 on the integer grid produces many ties and stays a metric.
        s += integer_grid ? std::abs(diff) : diff * diff;
      }
      m[i][j] = integer_grid ? s : std::sqrt(s);
    }
  return m;
}

DistanceMatrix pentagon_metric(bool featured) {
  const auto s = fixtures::pentagon();
  const auto g = featured ? fixtures::pentagon_featured_g() : InfluenceVector(s.schema);
  const auto wg = build_weighted_graph(s, g);
  return distance_matrix(wg, auto_activation(wg));
}

std::multiset<std::pair<double, double>> as_multiset(const std::vector<PersistencePoint>& pts, int dim) {
  std::multiset<std::pair<double, double>> out;
  for (const auto& p : pts)
    if (p.dim == dim) out.emplace(p.birth, p.death);
  return out;
}

bool closed(const Cycle& c) {
  std::map<std::size_t, int> degree;
  for (const auto& e : c.edges) {
    ++degree[e.a];
    ++degree[e.b];
  }
  for (const auto& [_, deg] : degree)
    if (deg % 2) return false;
  return !c.edges.empty();
}

}  // namespace

TEST_CASE("pentagon plain filtration") {
  const auto f = rips_filtration(pentagon_metric(false), 2);
  std::vector<double> edge_values;
  double first_triangle = kInfinity;
  for (const auto& s : f.simplices) {
    if (s.dim == 0) CHECK(s.value == 0.0);
    if (s.dim == 1) edge_values.push_back(s.value);
    if (s.dim == 2) first_triangle = std::min(first_triangle, s.value);
  }
  REQUIRE(edge_values.size() == 10);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(edge_values[i] - 1.0 / 6) <= kTol);
  CHECK(std::abs(first_triangle - 1.0 / 3) <= kTol);
  // {21,22,23} enters at max(1/6, 1/6, 1/3).
  const auto it = std::find_if(f.simplices.begin(), f.simplices.end(), [](const Simplex& s) {
    return s.dim == 2 && s.vertices[0] == 0 && s.vertices[1] == 1 && s.vertices[2] == 2;
  });
  REQUIRE(it != f.simplices.end());
  CHECK(std::abs(it->value - 1.0 / 3) <= kTol);
}

TEST_CASE("tiny filtrations") {
  const auto two = rips_filtration(from_matrix({{0, 1}, {1, 0}}), 2);
  REQUIRE(two.simplices.size() == 3);
  CHECK(two.simplices[2].dim == 1);
  CHECK(two.simplices[2].value == 1.0);

  const auto one = rips_filtration(from_matrix({{0}}), 2);
  REQUIRE(one.simplices.size() == 1);
  const auto dgm = persistence_diagrams(one);
  REQUIRE(dgm.points.size() == 1);
  CHECK_FALSE(dgm.points[0].finite());
}

TEST_CASE("vertex cap") {
  std::mt19937_64 rng(1);
  const auto d = from_matrix(random_euclidean(rng, 10));
  try {
    rips_filtration(d, 2, 8);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find(std::to_string(rips_simplex_count(10, 2))) != std::string::npos);
  }
  CHECK(rips_simplex_count(10, 2) == 10 + 45 + 120);
  CHECK_THROWS(rips_filtration(d, 4));
  CHECK_THROWS(rips_filtration(d, 0));
}

TEST_CASE("pentagon plain diagram") {
  const auto dgm = persistence_diagrams(rips_filtration(pentagon_metric(false), 2));
  const auto d0 = dgm.dimension(0);
  REQUIRE(d0.size() == 5);
  for (int i = 0; i < 4; ++i) {
    CHECK(d0[i].birth == 0.0);
    CHECK(std::abs(d0[i].death - 1.0 / 6) <= kTol);
  }
  CHECK_FALSE(d0[4].finite());
  CHECK(dgm.dimension(1).empty());
  CHECK(dgm.representatives.empty());
}

TEST_CASE("pentagon featured diagram") {
  const auto d = pentagon_metric(true);
  const auto dgm = persistence_diagrams(rips_filtration(d, 2), {true, false});
  const auto d0 = dgm.dimension(0);
  REQUIRE(d0.size() == 5);
  CHECK(std::abs(d0[0].death - 1.0 / 12) <= kTol);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(d0[i].death - 1.0 / 6) <= kTol);
  CHECK_FALSE(d0[4].finite());
  const auto d1 = dgm.dimension(1);
  REQUIRE(d1.size() == 1);
  CHECK(std::abs(d1[0].birth - 1.0 / 6) <= kTol);
  CHECK(std::abs(d1[0].death - 1.0 / 3) <= kTol);

  // Independent check of the death value: one loop just below 1/3, none at 1/3.
  const auto m = to_matrix(d);
  CHECK(oracle::rips_betti(m, 1.0 / 3 - 1e-9).second == 1);
  CHECK(oracle::rips_betti(m, 1.0 / 3 + 1e-12).second == 0);
  CHECK(oracle::rips_betti(m, 1.0 / 6 - 1e-9).second == 0);

  REQUIRE(dgm.representatives.size() == 1);
  const auto& rep = dgm.representatives.begin()->second;
  CHECK(closed(rep));
  CHECK(rep.vertices.size() >= 4);
  for (auto v : rep.vertices) CHECK(v < 5);
  // Every edge of the representative is present at the birth scale.
  for (const auto& e : rep.edges) CHECK(d(e.a, e.b) <= d1[0].birth + kTol);

  const auto json = nlohmann::json::parse(representatives_to_json(dgm));
  REQUIRE(json.size() == 1);
  CHECK(json[0].size() == rep.vertices.size());
}

TEST_CASE("square representative") {
  const double r2 = std::sqrt(2.0);
  const auto f = rips_filtration(from_matrix({{0, 1, r2, 1}, {1, 0, 1, r2}, {r2, 1, 0, 1}, {1, r2, 1, 0}}), 2);
  const auto dgm = persistence_diagrams(f, {true, false});
  const auto d1 = dgm.dimension(1);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].birth == 1.0);
  CHECK(d1[0].death == doctest::Approx(r2).epsilon(kTol));
  const auto reps = representative_cycles(f);
  REQUIRE(reps.size() == 1);
  CHECK(reps.begin()->second.vertices.size() == 4);
  CHECK(closed(reps.begin()->second));
}

TEST_CASE("infinite dim-1 classes use kernel columns") {
  const double r2 = std::sqrt(2.0);
  const auto f = rips_filtration(from_matrix({{0, 1, r2, 1}, {1, 0, 1, r2}, {r2, 1, 0, 1}, {1, r2, 1, 0}}), 1);
  const auto dgm = persistence_diagrams(f, {true, true});
  const auto d1 = dgm.dimension(1);
  REQUIRE(d1.size() == 3);  // 6 edges, 3 tree edges
  for (const auto& p : d1) CHECK_FALSE(p.finite());
  REQUIRE(dgm.representatives.size() == 3);
  for (const auto& [idx, cycle] : dgm.representatives) {
    CHECK(closed(cycle));
    CHECK(dgm.points[idx].dim == 1);
  }
}

TEST_CASE("diagram CSV round trip") {
  const auto dgm = persistence_diagrams(rips_filtration(pentagon_metric(true), 2));
  const auto csv = diagram_to_csv(dgm.points);
  CHECK(csv.find("1,0.166666666667,0.333333333333") != std::string::npos);
  CHECK(csv.find("0,0,inf") != std::string::npos);
  const auto back = diagram_from_csv(csv);
  REQUIRE(back.size() == dgm.points.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].dim == dgm.points[i].dim);
    CHECK(back[i].finite() == dgm.points[i].finite());
    if (back[i].finite()) CHECK(back[i].death == doctest::Approx(dgm.points[i].death).epsilon(1e-11));
  }
  CHECK_THROWS(diagram_from_csv("dim,birth,death\n0,x,1\n"));
}

TEST_CASE("property: dim-0 deaths equal MST edge lengths") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 20)(rng);
    const auto m = random_euclidean(rng, n, trial % 2 == 1);
    const auto dgm = persistence_diagrams(rips_filtration(from_matrix(m), 1));
    const auto d0 = dgm.dimension(0);
    REQUIRE(d0.size() == n);
    std::vector<double> deaths;
    std::size_t infinite = 0;
    for (const auto& p : d0) {
      CHECK(p.birth == 0.0);
      if (p.finite()) deaths.push_back(p.death);
      else ++infinite;
    }
    CHECK(infinite == 1);
    std::sort(deaths.begin(), deaths.end());
    CHECK(deaths == oracle::mst_lengths(m));
  }
}

TEST_CASE("property: Betti numbers match brute-force homology at every scale") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 8)(rng);
    const auto m = random_euclidean(rng, n, trial % 3 == 0);
    const auto dgm = persistence_diagrams(rips_filtration(from_matrix(m), 2));
    std::set<double> scales;
    for (const auto& row : m) scales.insert(row.begin(), row.end());
    for (double eps : scales) {
      std::size_t b0 = 0, b1 = 0;
      for (const auto& p : dgm.points) {
        if (p.birth <= eps && eps < p.death) (p.dim == 0 ? b0 : b1)++;
      }
      const auto [o0, o1] = oracle::rips_betti(m, eps);
      CHECK(b0 == o0);
      CHECK(b1 == o1);
    }
  }
}

TEST_CASE("property: diagrams do not depend on vertex order") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 9)(rng);
    const auto m = random_euclidean(rng, n, true);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    oracle::Matrix pm(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) pm[i][j] = m[perm[i]][perm[j]];
    const auto a = persistence_diagrams(rips_filtration(from_matrix(m), 2), {true, false});
    const auto b = persistence_diagrams(rips_filtration(from_matrix(pm), 2), {true, false});
    CHECK(as_multiset(a.points, 0) == as_multiset(b.points, 0));
    CHECK(as_multiset(a.points, 1) == as_multiset(b.points, 1));
    for (const auto& [idx, cycle] : a.representatives) {
      CHECK(closed(cycle));
      for (const auto& e : cycle.edges) CHECK(m[e.a][e.b] <= a.points[idx].birth);
    }
  }
}
