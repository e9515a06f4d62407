#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "feathom/graph.hpp"

namespace feathom {

/// sup |d/dz (1 - exp(-z^2))| = sqrt(2) * exp(-1/2), attained at z = 1/sqrt(2).
double gaussian_lipschitz();

/// Activation used to fold vertex weights into edge lengths. Maps the reals
/// into [0, 1), is 0 at 0 and non-decreasing.
class ActivationFn {
 public:
  enum class Kind { GaussianAuto, GaussianRaw, CustomTable };

  /// rho(z) = 1 - exp(-z^2) for z >= 0, else 0.
  static ActivationFn gaussian_raw();

  /// rho(2z / (scale + 1)). The Lipschitz bound is 2 * gaussian_lipschitz()
  /// regardless of scale.
  static ActivationFn gaussian_auto(double scale);

  /// Piecewise-linear interpolation through (z, rho) breakpoints, constant
  /// beyond the ends. Breakpoints must be sorted by z, include rho(0) = 0,
  /// be non-decreasing and lie in (-1, 1). `lipschitz_k` defaults to the
  /// steepest segment slope.
  static ActivationFn custom_table(std::vector<std::pair<double, double>> table,
                                   double lipschitz_k = 0.0);

  double operator()(double z) const;

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  double lipschitz_k() const { return lipschitz_k_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

 private:
  Kind kind_ = Kind::GaussianRaw;
  double scale_ = 0.0;
  double lipschitz_k_ = 0.0;
  std::vector<std::pair<double, double>> table_;
};

/// How to pick the activation for a given graph. Auto derives its scale from
/// the graph's vertex weights, so it is resolved per influence vector.
struct ActivationSpec {
  ActivationFn::Kind kind = ActivationFn::Kind::GaussianAuto;
  std::vector<std::pair<double, double>> table;  // CustomTable only
  double lipschitz_k = 0.0;                      // CustomTable only; 0 = derive

  ActivationFn resolve(const WeightedGraph& graph) const;
  double lipschitz_bound() const;
};

/// Auto activation: scale M is the largest vertex-weight sum over distinct
/// vertex pairs, or 0 with fewer than 2 vertices.
ActivationFn auto_activation(const WeightedGraph& graph);

/// min over edges of 1 / edge weight. Throws StructureError with no edges.
double min_reciprocal_weight(const WeightedGraph& graph);

/// 1 / w(e) - alpha * rho(vw(a) + vw(b)).
double edge_length(const WeightedGraph& graph, const ActivationFn& rho, std::size_t edge);

std::vector<double> edge_lengths(const WeightedGraph& graph, const ActivationFn& rho);

/// Symmetric matrix of shortest-path distances.
struct DistanceMatrix {
  std::vector<std::string> order;
  std::vector<double> values;  // row-major, n x n

  std::size_t size() const { return order.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values[i * order.size() + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * order.size() + j]; }
};

/// Shortest paths under explicit per-edge lengths (Dijkstra from every source).
DistanceMatrix shortest_path_matrix(const GraphSkeleton& skeleton,
                                    const std::vector<double>& lengths);

DistanceMatrix distance_matrix(const WeightedGraph& graph, const ActivationFn& rho);

/// Plain reciprocal-frequency metric: every edge has length 1 / f_e.
DistanceMatrix frequency_distance_matrix(const GraphSkeleton& skeleton);

/// CSV with a header of vertex labels followed by the full symmetric matrix.
std::string distance_matrix_to_csv(const DistanceMatrix& d);

}  // namespace feathom
