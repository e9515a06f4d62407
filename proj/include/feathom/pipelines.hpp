#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feathom/analytics.hpp"
#include "feathom/graph.hpp"
#include "feathom/metric.hpp"
#include "feathom/persistence.hpp"
#include "feathom/series.hpp"

namespace feathom {

/// Settings shared by every pipeline that turns a featured series into a diagram.
struct PipelineOptions {
  ActivationSpec activation;
  int max_dim = kDefaultMaxDim;
  std::size_t vertex_cap = kDefaultVertexCap;
  std::size_t jobs = 1;
};

/// Full chain: skeleton, counts, weights, activation, metric, Rips, reduction.
PersistenceDiagram featured_persistence(const FeaturedSeries& series, const InfluenceVector& g,
                                        const PipelineOptions& options = {},
                                        bool representatives = false);

struct PricePoint {
  std::string date;  // ISO-8601, YYYY-MM-DD
  double close = 0.0;
};

/// Parses `date,close` CSV.
std::vector<PricePoint> parse_price_csv(std::string_view text);

/// 0 = Monday ... 6 = Sunday. Throws FormatError on malformed dates.
int iso_weekday(const std::string& date);

/// Equal-width bin of `x` over [lo, hi]; right edges belong to the right
/// bin and `hi` to the last one. A degenerate range maps to bin n / 2.
std::size_t equal_width_bin(double x, double lo, double hi, std::size_t n_bins);

FeatureSet stock_schema(std::size_t n_delta_bins = 4);

/// Log returns binned into I1..In, weekday zeroth features and J1..Jm first
/// features binned over consecutive return differences.
FeaturedSeries stock_preprocess(const std::vector<PricePoint>& prices, std::size_t n_bins = 30,
                                std::size_t n_delta_bins = 4);

struct WindowWarning {
  std::size_t start = 0;
  std::string message;
};

struct AnomalyCurve {
  std::vector<std::size_t> window_starts;
  std::vector<std::string> start_labels;
  std::vector<double> raw_scores;
  std::vector<double> scores;
  std::size_t window = 0;
  double normalization = 0.0;
  std::vector<WindowWarning> warnings;
};

/// Scales raw scores so the maximum is 1; all-zero input stays zero with
/// normalization 0.
void normalize_curve(AnomalyCurve& curve);

/// Sum over landscape levels of the sup norm of the finite dim-1 diagram.
double window_score(const FeaturedSeries& window, const InfluenceVector& g,
                    const PipelineOptions& options);

AnomalyCurve asc_curve(const FeaturedSeries& series, const InfluenceVector& g, std::size_t window,
                       std::size_t step = 1, const PipelineOptions& options = {});

/// Pointwise product of aligned curves, renormalized to max 1.
AnomalyCurve tasc_curve(const std::vector<AnomalyCurve>& curves);

/// CSV `start_index,start_date,score`.
std::string curve_to_csv(const AnomalyCurve& curve);
AnomalyCurve curve_from_csv(std::string_view text);

struct GridCell {
  double x = 0.0;
  double y = 0.0;
  std::optional<DiagramStats> stats;  // empty when the cell failed
  double sup_sum = 0.0;
  double l1_sum = 0.0;
  double overlap_pct = 0.0;
  std::string error;
};

/// One cell: g(zeroth_feature) = x, g(first_feature) = y, zero elsewhere.
GridCell music_cell(const FeaturedSeries& series, std::size_t zeroth_feature,
                    std::size_t first_feature, double x, double y,
                    const PipelineOptions& options = {});

/// Cells in row-major order over (x_values, y_values).
std::vector<GridCell> music_stats_grid(const FeaturedSeries& series,
                                       const std::string& zeroth_feature,
                                       const std::string& first_feature,
                                       const std::vector<double>& x_values,
                                       const std::vector<double>& y_values,
                                       const PipelineOptions& options = {});

/// CSV `x,y,longest,shortest,count,sup_sum,l1_sum,overlap_pct`.
std::string grid_to_csv(const std::vector<GridCell>& grid);

struct StabilityConstants {
  double max_vertex_count = 0.0;  // max row sum of c0
  double min_edge_count = 0.0;    // min row sum of c1
  double proof = 0.0;             // (2k C0max + 1)(|V| - 1) / C1min
  double statement = 0.0;         // (k C0max + 1) 2 (|V| - 1) / C1min
};

StabilityConstants stability_constants(const CountMatrices& counts, double lipschitz_k,
                                       std::size_t n_vertices);

/// The bound constant used by stability checks (the proof's form).
double stability_constant(const CountMatrices& counts, double lipschitz_k, std::size_t n_vertices);

struct StabilityReport {
  StabilityConstants constants;
  double lipschitz_k = 0.0;
  double g_delta = 0.0;
  double bound = 0.0;
  double tolerance = 1e-9;
  std::vector<int> dims;
  std::vector<double> bottleneck;
  std::vector<bool> satisfied;

  bool all_satisfied() const;
};

StabilityReport stability_check(const FeaturedSeries& series, const InfluenceVector& g,
                                const InfluenceVector& g2, const ActivationSpec& activation,
                                const std::vector<int>& dims = {0, 1},
                                const PipelineOptions& options = {});

std::string stability_report_to_json(const StabilityReport& report);

/// Runs `fn(i)` for i in [0, count) on up to `jobs` threads. Each index is
/// visited exactly once; callers write results into per-index slots.
template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn);

}  // namespace feathom

#include "feathom/detail/parallel.hpp"
