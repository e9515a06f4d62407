#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "feathom/series.hpp"

namespace feathom {

/// Dense row-major matrix of non-negative counts.
class CountMatrix {
 public:
  CountMatrix() = default;
  CountMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::int64_t row_sum(std::size_t r) const;

  /// (M · v)_r for every row.
  std::vector<double> multiply(const std::vector<double>& v) const;

  const std::vector<std::int64_t>& data() const { return data_; }

  bool operator==(const CountMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Unordered pair of vertex indices; `a < b` always.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  bool operator==(const Edge&) const = default;
};

/// Frequency graph of a series: distinct observations as vertices, adjacent
/// distinct observations as edges. Both lists are in first-appearance order.
struct GraphSkeleton {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  std::vector<std::int64_t> edge_freq;

  std::size_t vertex_index(const std::string& label) const;
  std::size_t edge_index(std::size_t u, std::size_t v) const;
  bool connected() const;
};

struct CountMatrices {
  CountMatrix c0;  // |V| x (1 + |F0|), column 0 is the empty state
  CountMatrix c1;  // |E| x (1 + |F1|), column 0 is the empty state
};

/// Vertex weights C0·g0 and edge weights C1·(g1 + 1).
struct WeightedGraph {
  GraphSkeleton skeleton;
  std::vector<double> vertex_weight;
  std::vector<double> edge_weight;
};

GraphSkeleton build_skeleton(const FeaturedSeries& series);

CountMatrices count_matrices(const FeaturedSeries& series, const GraphSkeleton& skeleton);

/// True when every row of c1 sums to the edge frequency. Holds whenever each
/// timestamp carries at most one first feature.
bool counts_consistent(const CountMatrices& counts, const GraphSkeleton& skeleton);

/// True when no timestamp carries more than one first feature.
bool at_most_one_first_feature(const FeaturedSeries& series);

WeightedGraph weighted_graph(const GraphSkeleton& skeleton, const CountMatrices& counts,
                             const InfluenceVector& g);

/// Skeleton, counts and weights in one call.
WeightedGraph build_weighted_graph(const FeaturedSeries& series, const InfluenceVector& g);

/// JSON debug dump: vertex order, edge order, frequencies, c0 and c1 row-major.
std::string graph_to_json(const GraphSkeleton& skeleton, const CountMatrices& counts,
                          const WeightedGraph* weighted = nullptr);

}  // namespace feathom
