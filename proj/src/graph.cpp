#include "feathom/graph.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "json.hpp"

namespace feathom {

namespace {

std::uint64_t edge_key(std::size_t u, std::size_t v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

}  // namespace

std::int64_t CountMatrix::row_sum(std::size_t r) const {
  std::int64_t s = 0;
  for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c);
  return s;
}

std::vector<double> CountMatrix::multiply(const std::vector<double>& v) const {
  if (v.size() != cols_) throw InputError("count matrix / vector dimension mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += static_cast<double>((*this)(r, c)) * v[c];
    out[r] = s;
  }
  return out;
}

std::size_t GraphSkeleton::vertex_index(const std::string& label) const {
  auto it = std::find(vertices.begin(), vertices.end(), label);
  if (it == vertices.end()) throw BoundsError("no vertex " + label);
  return static_cast<std::size_t>(it - vertices.begin());
}

std::size_t GraphSkeleton::edge_index(std::size_t u, std::size_t v) const {
  const Edge e{std::min(u, v), std::max(u, v)};
  auto it = std::find(edges.begin(), edges.end(), e);
  if (it == edges.end()) throw BoundsError("no such edge");
  return static_cast<std::size_t>(it - edges.begin());
}

bool GraphSkeleton::connected() const {
  if (vertices.size() <= 1) return true;
  std::vector<std::size_t> parent(vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = vertices.size();
  for (const auto& e : edges) {
    auto ra = find(e.a), rb = find(e.b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components == 1;
}

GraphSkeleton build_skeleton(const FeaturedSeries& series) {
  if (series.size() < 2) throw InputError("series needs at least 2 observations");
  GraphSkeleton g;
  std::unordered_map<std::string, std::size_t> vertex_of;
  std::vector<std::size_t> seq;
  seq.reserve(series.size());
  for (const auto& value : series.base.values) {
    auto [it, inserted] = vertex_of.try_emplace(value, g.vertices.size());
    if (inserted) g.vertices.push_back(value);
    seq.push_back(it->second);
  }
  std::unordered_map<std::uint64_t, std::size_t> edge_of;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    const auto u = seq[k], v = seq[k + 1];
    if (u == v) continue;
    auto [it, inserted] = edge_of.try_emplace(edge_key(u, v), g.edges.size());
    if (inserted) {
      g.edges.push_back({std::min(u, v), std::max(u, v)});
      g.edge_freq.push_back(0);
    }
    ++g.edge_freq[it->second];
  }
  if (!g.connected()) throw StructureError("frequency graph is disconnected; metric undefined");
  return g;
}

CountMatrices count_matrices(const FeaturedSeries& series, const GraphSkeleton& skeleton) {
  CountMatrices cm{CountMatrix(skeleton.vertices.size(), series.schema.zeroth().size() + 1),
                   CountMatrix(skeleton.edges.size(), series.schema.first().size() + 1)};

  std::unordered_map<std::string, std::size_t> vertex_of;
  for (std::size_t i = 0; i < skeleton.vertices.size(); ++i) vertex_of[skeleton.vertices[i]] = i;
  std::unordered_map<std::uint64_t, std::size_t> edge_of;
  for (std::size_t i = 0; i < skeleton.edges.size(); ++i) {
    edge_of[edge_key(skeleton.edges[i].a, skeleton.edges[i].b)] = i;
  }

  auto vertex = [&](std::size_t t) {
    auto it = vertex_of.find(series.base.values[t]);
    if (it == vertex_of.end()) throw InputError("skeleton was not built from this series");
    return it->second;
  };

  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto v = vertex(t);
    if (series.feat0[t].empty()) {
      ++cm.c0(v, 0);
    } else {
      for (auto j : series.feat0[t]) ++cm.c0(v, j + 1);
    }
    if (t + 1 == series.size()) break;
    const auto w = vertex(t + 1);
    if (v == w) continue;
    auto it = edge_of.find(edge_key(v, w));
    if (it == edge_of.end()) throw InputError("skeleton was not built from this series");
    // First features are attributed at the earlier timestamp of the pair.
    if (series.feat1[t].empty()) {
      ++cm.c1(it->second, 0);
    } else {
      for (auto j : series.feat1[t]) ++cm.c1(it->second, j + 1);
    }
  }
  return cm;
}

bool counts_consistent(const CountMatrices& counts, const GraphSkeleton& skeleton) {
  if (counts.c1.rows() != skeleton.edges.size()) return false;
  for (std::size_t i = 0; i < skeleton.edges.size(); ++i) {
    if (counts.c1.row_sum(i) != skeleton.edge_freq[i]) return false;
  }
  return true;
}

bool at_most_one_first_feature(const FeaturedSeries& series) {
  return std::all_of(series.feat1.begin(), series.feat1.end(),
                     [](const auto& s) { return s.size() <= 1; });
}

WeightedGraph weighted_graph(const GraphSkeleton& skeleton, const CountMatrices& counts,
                             const InfluenceVector& g) {
  if (counts.c0.rows() != skeleton.vertices.size() || counts.c1.rows() != skeleton.edges.size()) {
    throw InputError("count matrices do not match the skeleton");
  }
  if (counts.c0.cols() != g.g0().size() || counts.c1.cols() != g.g1().size()) {
    throw SchemaError("influence vector does not match the feature schema");
  }
  WeightedGraph out;
  out.skeleton = skeleton;
  out.vertex_weight = counts.c0.multiply(g.g0());
  std::vector<double> shifted = g.g1();
  for (auto& x : shifted) x += 1.0;
  out.edge_weight = counts.c1.multiply(shifted);
  for (std::size_t i = 0; i < out.edge_weight.size(); ++i) {
    if (!(out.edge_weight[i] > 0.0)) {
      throw StructureError("edge {" + skeleton.vertices[skeleton.edges[i].a] + "," +
                           skeleton.vertices[skeleton.edges[i].b] +
                           "} has zero weighted frequency; count rows are inconsistent");
    }
  }
  return out;
}

WeightedGraph build_weighted_graph(const FeaturedSeries& series, const InfluenceVector& g) {
  auto skeleton = build_skeleton(series);
  auto counts = count_matrices(series, skeleton);
  return weighted_graph(skeleton, counts, g);
}

std::string graph_to_json(const GraphSkeleton& skeleton, const CountMatrices& counts,
                          const WeightedGraph* weighted) {
  nlohmann::ordered_json doc;
  doc["vertices"] = skeleton.vertices;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : skeleton.edges) {
    edges.push_back({skeleton.vertices[e.a], skeleton.vertices[e.b]});
  }
  doc["edges"] = edges;
  doc["edge_freq"] = skeleton.edge_freq;
  auto matrix = [](const CountMatrix& m) {
    nlohmann::ordered_json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = m.data();
    return j;
  };
  doc["c0"] = matrix(counts.c0);
  doc["c1"] = matrix(counts.c1);
  if (weighted) {
    doc["vertex_weight"] = weighted->vertex_weight;
    doc["edge_weight"] = weighted->edge_weight;
  }
  return doc.dump(2) + "\n";
}

}  // namespace feathom
