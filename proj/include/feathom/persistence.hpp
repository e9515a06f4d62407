#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "feathom/graph.hpp"
#include "feathom/metric.hpp"

namespace feathom {

inline constexpr std::size_t kDefaultVertexCap = 64;
inline constexpr int kDefaultMaxDim = 2;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Simplex {
  std::array<std::uint32_t, 4> vertices{};  // sorted, first dim + 1 entries used
  int dim = 0;
  double value = 0.0;
};

/// Rips filtration sorted by (value, dimension, lexicographic vertices).
/// `max_dim` is the top simplex dimension requested; homology is reported
/// in dimensions 0 .. max_dim - 1.
struct Filtration {
  std::vector<std::string> labels;
  std::vector<Simplex> simplices;
  int max_dim = kDefaultMaxDim;
};

/// Number of simplices of dimension <= max_dim on n vertices.
std::size_t rips_simplex_count(std::size_t n_vertices, int max_dim);

/// All simplices up to `max_dim` (clamped to |V| - 1). Throws ResourceError
/// when |V| exceeds `vertex_cap`; `max_dim` must lie in [1, 3].
Filtration rips_filtration(const DistanceMatrix& d, int max_dim = kDefaultMaxDim,
                           std::size_t vertex_cap = kDefaultVertexCap);

struct PersistencePoint {
  double birth = 0.0;
  double death = kInfinity;
  int dim = 0;

  bool finite() const { return death != kInfinity; }
  double persistence() const { return death - birth; }
  bool operator==(const PersistencePoint&) const = default;
};

/// A 1-cycle as a set of edges; `vertices` walks the loop when it is a
/// simple cycle and is the sorted vertex set otherwise.
struct Cycle {
  std::vector<Edge> edges;
  std::vector<std::size_t> vertices;
};

struct PersistenceDiagram {
  std::vector<std::string> labels;
  /// Sorted by (dim, birth, death). Zero-persistence pairs in dim >= 1 are dropped.
  std::vector<PersistencePoint> points;
  /// Keyed by index into `points`; only dim-1 points.
  std::map<std::size_t, Cycle> representatives;

  std::vector<PersistencePoint> dimension(int dim) const;
  /// Vertex label sets of every stored representative, in point order.
  std::vector<std::vector<std::string>> representative_labels() const;
};

struct PersistenceOptions {
  bool representatives = false;
  /// Also report classes in dimension max_dim. Nothing in the filtration can
  /// kill them, so they are reported against the truncated complex.
  bool include_top_dimension = false;
};

/// Z/2 column reduction with clearing.
PersistenceDiagram persistence_diagrams(const Filtration& f, const PersistenceOptions& options = {});

/// Dim-1 representatives. Finite points use the reduced boundary column of
/// the death simplex; infinite points use the kernel column of the birth edge.
std::map<std::size_t, Cycle> representative_cycles(const Filtration& f);

/// CSV `dim,birth,death` with `inf` for infinite deaths.
std::string diagram_to_csv(const std::vector<PersistencePoint>& points);
std::vector<PersistencePoint> diagram_from_csv(std::string_view text);

/// JSON list of vertex-label arrays, one per representative.
std::string representatives_to_json(const PersistenceDiagram& dgm);

}  // namespace feathom
