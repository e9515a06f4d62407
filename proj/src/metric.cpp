#include "feathom/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "text_util.hpp"

namespace feathom {

namespace {

// Rounding would reach 1.0 for z above about 6; the cap keeps the range open
// at 1 so edge lengths stay strictly positive.
double gaussian(double z) {
  if (z <= 0.0) return 0.0;
  return std::min(-std::expm1(-z * z), std::nextafter(1.0, 0.0));
}

double interpolate(const std::vector<std::pair<double, double>>& table, double z) {
  if (z <= table.front().first) return table.front().second;
  if (z >= table.back().first) return table.back().second;
  auto hi = std::upper_bound(table.begin(), table.end(), z,
                             [](double x, const auto& p) { return x < p.first; });
  auto lo = hi - 1;
  const double t = (z - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

}  // namespace

double gaussian_lipschitz() { return std::sqrt(2.0) * std::exp(-0.5); }

ActivationFn ActivationFn::gaussian_raw() {
  ActivationFn f;
  f.kind_ = Kind::GaussianRaw;
  f.lipschitz_k_ = gaussian_lipschitz();
  return f;
}

ActivationFn ActivationFn::gaussian_auto(double scale) {
  if (!(scale >= 0.0)) throw DomainError("activation scale must be non-negative");
  ActivationFn f;
  f.kind_ = Kind::GaussianAuto;
  f.scale_ = scale;
  f.lipschitz_k_ = 2.0 * gaussian_lipschitz();
  return f;
}

ActivationFn ActivationFn::custom_table(std::vector<std::pair<double, double>> table,
                                        double lipschitz_k) {
  if (table.size() < 2) throw DomainError("activation table needs at least 2 breakpoints");
  bool has_origin = false;
  double steepest = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto [z, y] = table[i];
    if (!(y > -1.0 && y < 1.0)) throw DomainError("activation values must lie in (-1, 1)");
    if (z == 0.0) has_origin = has_origin || y == 0.0;
    if (i > 0) {
      const auto [pz, py] = table[i - 1];
      if (!(z > pz)) throw DomainError("activation table must be strictly sorted by z");
      if (y < py) throw DomainError("activation table must be non-decreasing");
      steepest = std::max(steepest, (y - py) / (z - pz));
    }
  }
  if (!has_origin) throw DomainError("activation table must contain the point (0, 0)");
  if (lipschitz_k < 0.0) throw DomainError("Lipschitz constant must be non-negative");
  if (lipschitz_k > 0.0 && lipschitz_k < steepest) {
    throw DomainError("Lipschitz constant is smaller than the steepest table segment");
  }
  ActivationFn f;
  f.kind_ = Kind::CustomTable;
  f.table_ = std::move(table);
  f.lipschitz_k_ = lipschitz_k > 0.0 ? lipschitz_k : steepest;
  return f;
}

double ActivationFn::operator()(double z) const {
  switch (kind_) {
    case Kind::GaussianRaw:
      return gaussian(z);
    case Kind::GaussianAuto:
      return gaussian(2.0 * z / (scale_ + 1.0));
    case Kind::CustomTable:
      return interpolate(table_, z);
  }
  return 0.0;
}

ActivationFn ActivationSpec::resolve(const WeightedGraph& graph) const {
  switch (kind) {
    case ActivationFn::Kind::GaussianAuto:
      return auto_activation(graph);
    case ActivationFn::Kind::GaussianRaw:
      return ActivationFn::gaussian_raw();
    case ActivationFn::Kind::CustomTable:
      return ActivationFn::custom_table(table, lipschitz_k);
  }
  return ActivationFn::gaussian_raw();
}

double ActivationSpec::lipschitz_bound() const {
  switch (kind) {
    case ActivationFn::Kind::GaussianAuto:
      return 2.0 * gaussian_lipschitz();
    case ActivationFn::Kind::GaussianRaw:
      return gaussian_lipschitz();
    case ActivationFn::Kind::CustomTable:
      return ActivationFn::custom_table(table, lipschitz_k).lipschitz_k();
  }
  return 0.0;
}

ActivationFn auto_activation(const WeightedGraph& graph) {
  const auto& vw = graph.vertex_weight;
  double scale = 0.0;
  if (vw.size() >= 2) {
    // The largest pair sum over distinct vertices uses the two largest weights.
    std::vector<double> sorted = vw;
    std::partial_sort(sorted.begin(), sorted.begin() + 2, sorted.end(), std::greater<>());
    scale = std::max(0.0, sorted[0] + sorted[1]);
  }
  return ActivationFn::gaussian_auto(scale);
}

double min_reciprocal_weight(const WeightedGraph& graph) {
  if (graph.edge_weight.empty()) throw StructureError("graph has no edges");
  const double heaviest = *std::max_element(graph.edge_weight.begin(), graph.edge_weight.end());
  return 1.0 / heaviest;
}

double edge_length(const WeightedGraph& graph, const ActivationFn& rho, std::size_t edge) {
  if (edge >= graph.skeleton.edges.size()) throw BoundsError("edge index out of range");
  const double alpha = min_reciprocal_weight(graph);
  const auto& e = graph.skeleton.edges[edge];
  const double activation = rho(graph.vertex_weight[e.a] + graph.vertex_weight[e.b]);
  return 1.0 / graph.edge_weight[edge] - alpha * activation;
}

std::vector<double> edge_lengths(const WeightedGraph& graph, const ActivationFn& rho) {
  std::vector<double> out(graph.skeleton.edges.size());
  const double alpha = min_reciprocal_weight(graph);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& e = graph.skeleton.edges[i];
    const double activation = rho(graph.vertex_weight[e.a] + graph.vertex_weight[e.b]);
    out[i] = 1.0 / graph.edge_weight[i] - alpha * activation;
  }
  return out;
}

DistanceMatrix shortest_path_matrix(const GraphSkeleton& skeleton,
                                    const std::vector<double>& lengths) {
  const std::size_t n = skeleton.vertices.size();
  if (lengths.size() != skeleton.edges.size()) throw InputError("one length per edge required");
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency(n);
  for (std::size_t i = 0; i < skeleton.edges.size(); ++i) {
    if (!(lengths[i] > 0.0)) throw StructureError("edge lengths must be positive");
    adjacency[skeleton.edges[i].a].emplace_back(skeleton.edges[i].b, lengths[i]);
    adjacency[skeleton.edges[i].b].emplace_back(skeleton.edges[i].a, lengths[i]);
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  DistanceMatrix d{skeleton.vertices, std::vector<double>(n * n, kInf)};
  using Entry = std::pair<double, std::size_t>;
  for (std::size_t source = 0; source < n; ++source) {
    std::vector<double> dist(n, kInf);
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du > dist[u]) continue;
      for (auto [v, len] : adjacency[u]) {
        if (du + len < dist[v]) {
          dist[v] = du + len;
          heap.emplace(dist[v], v);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (std::isinf(dist[v])) throw StructureError("graph is disconnected; metric undefined");
      d.at(source, v) = dist[v];
    }
  }
  // Different summation orders can differ in the last ulp.
  for (std::size_t i = 0; i < n; ++i) {
    d.at(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = std::min(d(i, j), d(j, i));
      d.at(i, j) = m;
      d.at(j, i) = m;
    }
  }
  return d;
}

DistanceMatrix distance_matrix(const WeightedGraph& graph, const ActivationFn& rho) {
  if (!graph.skeleton.connected()) throw StructureError("graph is disconnected; metric undefined");
  return shortest_path_matrix(graph.skeleton, edge_lengths(graph, rho));
}

DistanceMatrix frequency_distance_matrix(const GraphSkeleton& skeleton) {
  std::vector<double> lengths(skeleton.edges.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (skeleton.edge_freq[i] <= 0) throw StructureError("edge with zero frequency");
    lengths[i] = 1.0 / static_cast<double>(skeleton.edge_freq[i]);
  }
  return shortest_path_matrix(skeleton, lengths);
}

std::string distance_matrix_to_csv(const DistanceMatrix& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out += ',';
    out += d.order[i];
  }
  out += '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (j) out += ',';
      out += detail::format_number(d(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace feathom
