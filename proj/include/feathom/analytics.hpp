#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feathom/persistence.hpp"
#include "feathom/series.hpp"

namespace feathom {

/// Bottleneck distance between two single-dimension diagrams. Infinite
/// points match only infinite points; unequal counts give infinity.
double bottleneck_distance(const std::vector<PersistencePoint>& a,
                           const std::vector<PersistencePoint>& b);

/// Piecewise-linear function given by sorted (x, y) breakpoints.
struct LandscapeLevel {
  std::vector<std::pair<double, double>> points;

  double operator()(double x) const;
  double sup() const;
  double integral() const;
};

/// lambda_1 >= lambda_2 >= ... ; levels that vanish identically are omitted.
struct Landscape {
  std::vector<LandscapeLevel> levels;

  /// lambda_k(x), 1-based k; 0 past the last stored level.
  double value(std::size_t k, double x) const;
};

/// Exact landscape of the finite points of a diagram. Infinite points are
/// skipped, or truncated at `cap_infinite` when given.
Landscape persistence_landscape(const std::vector<PersistencePoint>& points,
                                std::optional<double> cap_infinite = std::nullopt);

enum class LandscapeNorm { SupSum, L1Sum };

/// Sum over levels of the sup norm or of the integral.
double landscape_norm(const Landscape& landscape, LandscapeNorm which);

/// CSV `k,x,y` with one row per breakpoint.
std::string landscape_to_csv(const Landscape& landscape);

struct DiagramStats {
  std::optional<double> longest;
  std::optional<double> shortest;
  std::size_t count = 0;
};

/// Over finite points only.
DiagramStats diagram_stats(const std::vector<PersistencePoint>& points);

std::string stats_to_json(const DiagramStats& stats);

/// 100 * N_s / N_c, where N_c counts timestamps whose observation lies in
/// some cycle and N_s those lying in the intersection of at least two.
/// Returns 0 when N_c is 0.
double overlapping_percentage(const FeaturedSeries& series,
                              const std::vector<std::vector<std::string>>& cycles);

}  // namespace feathom
