#include "feathom/pipelines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "text_util.hpp"

namespace feathom {

PersistenceDiagram featured_persistence(const FeaturedSeries& series, const InfluenceVector& g,
                                        const PipelineOptions& options, bool representatives) {
  const auto graph = build_weighted_graph(series, g);
  const auto rho = options.activation.resolve(graph);
  const auto distances = distance_matrix(graph, rho);
  const auto filtration = rips_filtration(distances, options.max_dim, options.vertex_cap);
  PersistenceOptions ph;
  ph.representatives = representatives;
  return persistence_diagrams(filtration, ph);
}

// ---------------------------------------------------------------------------
// Stock preprocessing

std::vector<PricePoint> parse_price_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty price file");
  detail::strip_cr(line);
  if (detail::trim(detail::strip_bom(line)) != "date,close") {
    throw FormatError("expected header date,close");
  }
  std::vector<PricePoint> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    detail::strip_cr(line);
    if (detail::trim(line).empty()) continue;
    ++row;
    auto cells = detail::split(line, ',');
    if (cells.size() != 2) throw FormatError("price row " + std::to_string(row) + " needs 2 cells");
    PricePoint p;
    p.date = std::string(detail::trim(cells[0]));
    iso_weekday(p.date);
    try {
      std::size_t used = 0;
      const std::string close(detail::trim(cells[1]));
      p.close = std::stod(close, &used);
      if (used != close.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::logic_error&) {
      throw FormatError("unparseable close price at row " + std::to_string(row));
    }
    out.push_back(std::move(p));
  }
  return out;
}

int iso_weekday(const std::string& date) {
  using namespace std::chrono;
  int y = 0;
  unsigned m = 0, d = 0;
  char dash1 = 0, dash2 = 0;
  std::istringstream in(date);
  if (date.size() != 10 || !(in >> y >> dash1 >> m >> dash2 >> d) || dash1 != '-' || dash2 != '-') {
    throw FormatError("malformed ISO-8601 date '" + date + "'");
  }
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) throw FormatError("invalid calendar date '" + date + "'");
  return static_cast<int>(weekday{sys_days{ymd}}.iso_encoding()) - 1;
}

std::size_t equal_width_bin(double x, double lo, double hi, std::size_t n_bins) {
  if (n_bins == 0) throw DomainError("bin count must be positive");
  if (!(hi > lo)) return n_bins / 2;
  if (x >= hi) return n_bins - 1;
  if (x <= lo) return 0;
  const double width = (hi - lo) / static_cast<double>(n_bins);
  const auto k = static_cast<std::size_t>(std::floor((x - lo) / width));
  return std::min(k, n_bins - 1);
}

FeatureSet stock_schema(std::size_t n_delta_bins) {
  std::vector<std::string> first;
  for (std::size_t j = 1; j <= n_delta_bins; ++j) first.push_back("J" + std::to_string(j));
  return FeatureSet({"Mon", "Tue", "Wed", "Thu", "Fri"}, std::move(first));
}

FeaturedSeries stock_preprocess(const std::vector<PricePoint>& prices, std::size_t n_bins,
                                std::size_t n_delta_bins) {
  if (prices.size() < 3) throw InputError("stock preprocessing needs at least 3 prices");
  if (n_bins == 0 || n_delta_bins == 0) throw DomainError("bin counts must be positive");
  for (const auto& p : prices) {
    if (!(p.close > 0.0) || !std::isfinite(p.close)) {
      throw DomainError("non-positive price " + detail::format_number(p.close) + " on " + p.date);
    }
  }

  // X(t) = log P(t+1) - log P(t), taken as the log of the ratio.
  std::vector<double> returns(prices.size() - 1);
  for (std::size_t t = 0; t + 1 < prices.size(); ++t) {
    returns[t] = std::log(prices[t + 1].close / prices[t].close);
  }
  std::vector<double> deltas(returns.size() - 1);
  for (std::size_t t = 0; t + 1 < returns.size(); ++t) deltas[t] = returns[t + 1] - returns[t];

  const auto [rlo, rhi] = std::minmax_element(returns.begin(), returns.end());
  const auto [dlo, dhi] = std::minmax_element(deltas.begin(), deltas.end());

  FeaturedSeries out;
  out.schema = stock_schema(n_delta_bins);
  for (std::size_t t = 0; t < returns.size(); ++t) {
    out.base.timestamps.push_back(prices[t].date);
    out.base.values.push_back("I" + std::to_string(equal_width_bin(returns[t], *rlo, *rhi, n_bins) + 1));
    const int wd = iso_weekday(prices[t].date);
    out.feat0.push_back(wd < 5 ? std::vector<std::size_t>{static_cast<std::size_t>(wd)}
                               : std::vector<std::size_t>{});
    if (t < deltas.size()) {
      out.feat1.push_back({equal_width_bin(deltas[t], *dlo, *dhi, n_delta_bins)});
    } else {
      out.feat1.push_back({});
    }
  }
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Anomaly curves

void normalize_curve(AnomalyCurve& curve) {
  const double top = curve.raw_scores.empty()
                         ? 0.0
                         : *std::max_element(curve.raw_scores.begin(), curve.raw_scores.end());
  curve.scores.assign(curve.raw_scores.size(), 0.0);
  if (!(top > 0.0)) {
    curve.normalization = 0.0;
    return;
  }
  curve.normalization = top;
  for (std::size_t i = 0; i < curve.raw_scores.size(); ++i) curve.scores[i] = curve.raw_scores[i] / top;
}

double window_score(const FeaturedSeries& window, const InfluenceVector& g,
                    const PipelineOptions& options) {
  const auto dgm = featured_persistence(window, g, options);
  return landscape_norm(persistence_landscape(dgm.dimension(1)), LandscapeNorm::SupSum);
}

AnomalyCurve asc_curve(const FeaturedSeries& series, const InfluenceVector& g, std::size_t window,
                       std::size_t step, const PipelineOptions& options) {
  if (step == 0) throw InputError("window step must be at least 1");
  if (window < 2 || window > series.size()) {
    throw BoundsError("window length " + std::to_string(window) + " does not fit series of length " +
                      std::to_string(series.size()));
  }
  if (!g.matches(series.schema)) throw SchemaError("influence vector does not match the series schema");

  AnomalyCurve curve;
  curve.window = window;
  for (std::size_t start = 0; start + window <= series.size(); start += step) {
    curve.window_starts.push_back(start);
    curve.start_labels.push_back(series.base.timestamps[start]);
  }
  const std::size_t count = curve.window_starts.size();
  curve.raw_scores.assign(count, 0.0);
  std::vector<std::string> failures(count);

  parallel_for(count, options.jobs, [&](std::size_t i) {
    const auto slice = slice_window(series, curve.window_starts[i], window);
    try {
      curve.raw_scores[i] = window_score(slice, g, options);
    } catch (const StructureError& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < count; ++i) {
    if (!failures[i].empty()) curve.warnings.push_back({curve.window_starts[i], failures[i]});
  }
  normalize_curve(curve);
  return curve;
}

AnomalyCurve tasc_curve(const std::vector<AnomalyCurve>& curves) {
  if (curves.empty()) throw InputError("TASC needs at least one curve");
  const auto& first = curves.front();
  for (const auto& c : curves) {
    if (c.window_starts != first.window_starts || c.scores.size() != first.scores.size()) {
      throw InputError("anomaly curves are not aligned");
    }
  }
  AnomalyCurve out;
  out.window = first.window;
  out.window_starts = first.window_starts;
  out.start_labels = first.start_labels;
  out.raw_scores.assign(first.scores.size(), 1.0);
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.scores.size(); ++i) out.raw_scores[i] *= c.scores[i];
    out.warnings.insert(out.warnings.end(), c.warnings.begin(), c.warnings.end());
  }
  normalize_curve(out);
  return out;
}

std::string curve_to_csv(const AnomalyCurve& curve) {
  std::string out = "start_index,start_date,score\n";
  for (std::size_t i = 0; i < curve.scores.size(); ++i) {
    out += std::to_string(curve.window_starts[i]) + "," +
           (i < curve.start_labels.size() ? curve.start_labels[i] : std::string()) + "," +
           detail::format_number(curve.scores[i]) + "\n";
  }
  return out;
}

AnomalyCurve curve_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty curve file");
  detail::strip_cr(line);
  if (detail::trim(detail::strip_bom(line)) != "start_index,start_date,score") {
    throw FormatError("expected header start_index,start_date,score");
  }
  AnomalyCurve curve;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    detail::strip_cr(line);
    if (detail::trim(line).empty()) continue;
    ++row;
    auto cells = detail::split(line, ',');
    if (cells.size() != 3) throw FormatError("curve row " + std::to_string(row) + " needs 3 cells");
    try {
      curve.window_starts.push_back(std::stoul(std::string(detail::trim(cells[0]))));
      curve.start_labels.emplace_back(detail::trim(cells[1]));
      const double score = std::stod(std::string(detail::trim(cells[2])));
      if (score < 0.0) throw FormatError("negative score at curve row " + std::to_string(row));
      curve.raw_scores.push_back(score);
    } catch (const std::logic_error&) {
      throw FormatError("unparseable curve row " + std::to_string(row));
    }
  }
  normalize_curve(curve);
  return curve;
}

// ---------------------------------------------------------------------------
// Music statistics grid

GridCell music_cell(const FeaturedSeries& series, std::size_t zeroth_feature,
                    std::size_t first_feature, double x, double y, const PipelineOptions& options) {
  GridCell cell;
  cell.x = x;
  cell.y = y;
  InfluenceVector g(series.schema);
  g.set_g0(zeroth_feature + 1, x);
  g.set_g1(first_feature + 1, y);
  try {
    const auto dgm = featured_persistence(series, g, options, /*representatives=*/true);
    const auto dgm1 = dgm.dimension(1);
    cell.stats = diagram_stats(dgm1);
    const auto landscape = persistence_landscape(dgm1);
    cell.sup_sum = landscape_norm(landscape, LandscapeNorm::SupSum);
    cell.l1_sum = landscape_norm(landscape, LandscapeNorm::L1Sum);
    cell.overlap_pct = overlapping_percentage(series, dgm.representative_labels());
  } catch (const StructureError& e) {
    cell.stats.reset();
    cell.error = e.what();
  }
  return cell;
}

std::vector<GridCell> music_stats_grid(const FeaturedSeries& series,
                                       const std::string& zeroth_feature,
                                       const std::string& first_feature,
                                       const std::vector<double>& x_values,
                                       const std::vector<double>& y_values,
                                       const PipelineOptions& options) {
  const auto a = series.schema.find_zeroth(zeroth_feature);
  if (!a) throw SchemaError("unknown zeroth feature " + zeroth_feature);
  const auto b = series.schema.find_first(first_feature);
  if (!b) throw SchemaError("unknown first feature " + first_feature);
  for (double v : x_values) {
    if (!(v >= 0.0)) throw DomainError("negative influence in grid x values");
  }
  for (double v : y_values) {
    if (!(v >= 0.0)) throw DomainError("negative influence in grid y values");
  }

  std::vector<GridCell> grid(x_values.size() * y_values.size());
  parallel_for(grid.size(), options.jobs, [&](std::size_t i) {
    const auto xi = i / y_values.size(), yi = i % y_values.size();
    grid[i] = music_cell(series, *a, *b, x_values[xi], y_values[yi], options);
  });
  return grid;
}

std::string grid_to_csv(const std::vector<GridCell>& grid) {
  using detail::format_number;
  std::string out = "x,y,longest,shortest,count,sup_sum,l1_sum,overlap_pct\n";
  for (const auto& c : grid) {
    out += format_number(c.x) + "," + format_number(c.y) + ",";
    if (!c.stats) {
      out += ",,,,,\n";
      continue;
    }
    out += (c.stats->longest ? format_number(*c.stats->longest) : "") + ",";
    out += (c.stats->shortest ? format_number(*c.stats->shortest) : "") + ",";
    out += std::to_string(c.stats->count) + "," + format_number(c.sup_sum) + "," +
           format_number(c.l1_sum) + "," + format_number(c.overlap_pct) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stability

StabilityConstants stability_constants(const CountMatrices& counts, double lipschitz_k,
                                       std::size_t n_vertices) {
  if (lipschitz_k < 0.0) throw DomainError("Lipschitz constant must be non-negative");
  if (counts.c1.rows() == 0) throw DomainError("no edges: the stability constant is undefined");
  StabilityConstants c;
  std::int64_t c0_max = 0;
  for (std::size_t i = 0; i < counts.c0.rows(); ++i) c0_max = std::max(c0_max, counts.c0.row_sum(i));
  std::int64_t c1_min = counts.c1.row_sum(0);
  for (std::size_t i = 1; i < counts.c1.rows(); ++i) c1_min = std::min(c1_min, counts.c1.row_sum(i));
  if (c1_min <= 0) throw DomainError("an edge has an empty count row; C1min is zero");
  c.max_vertex_count = static_cast<double>(c0_max);
  c.min_edge_count = static_cast<double>(c1_min);
  const double paths = n_vertices > 0 ? static_cast<double>(n_vertices - 1) : 0.0;
  c.proof = (2.0 * lipschitz_k * c.max_vertex_count + 1.0) * paths / c.min_edge_count;
  c.statement = (lipschitz_k * c.max_vertex_count + 1.0) * 2.0 * paths / c.min_edge_count;
  return c;
}

double stability_constant(const CountMatrices& counts, double lipschitz_k, std::size_t n_vertices) {
  return stability_constants(counts, lipschitz_k, n_vertices).proof;
}

bool StabilityReport::all_satisfied() const {
  return std::all_of(satisfied.begin(), satisfied.end(), [](bool b) { return b; });
}

StabilityReport stability_check(const FeaturedSeries& series, const InfluenceVector& g,
                                const InfluenceVector& g2, const ActivationSpec& activation,
                                const std::vector<int>& dims, const PipelineOptions& options) {
  if (!g.matches(series.schema) || !g2.matches(series.schema)) {
    throw SchemaError("influence vectors do not match the series schema");
  }
  for (int p : dims) {
    if (p < 0 || p >= options.max_dim) {
      throw InputError("dimension " + std::to_string(p) + " is not computed with max_dim " +
                       std::to_string(options.max_dim));
    }
  }
  const auto skeleton = build_skeleton(series);
  const auto counts = count_matrices(series, skeleton);

  StabilityReport report;
  report.lipschitz_k = activation.lipschitz_bound();
  report.constants = stability_constants(counts, report.lipschitz_k, skeleton.vertices.size());
  report.g_delta = InfluenceVector::sup_distance(g, g2);
  report.bound = report.constants.proof * report.g_delta;
  report.dims = dims;

  PipelineOptions opts = options;
  opts.activation = activation;
  const auto dgm_a = featured_persistence(series, g, opts);
  const auto dgm_b = featured_persistence(series, g2, opts);
  for (int p : dims) {
    const double db = bottleneck_distance(dgm_a.dimension(p), dgm_b.dimension(p));
    report.bottleneck.push_back(db);
    report.satisfied.push_back(db <= report.bound + report.tolerance);
  }
  return report;
}

std::string stability_report_to_json(const StabilityReport& report) {
  nlohmann::ordered_json doc;
  doc["bound_constant"] = report.constants.proof;
  doc["statement_constant"] = report.constants.statement;
  doc["lipschitz_k"] = report.lipschitz_k;
  doc["c0_max"] = report.constants.max_vertex_count;
  doc["c1_min"] = report.constants.min_edge_count;
  doc["g_delta"] = report.g_delta;
  doc["bound"] = report.bound;
  doc["tolerance"] = report.tolerance;
  auto per_dim = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.dims.size(); ++i) {
    nlohmann::ordered_json d;
    d["dim"] = report.dims[i];
    d["bottleneck"] = report.bottleneck[i];
    d["satisfied"] = static_cast<bool>(report.satisfied[i]);
    per_dim.push_back(d);
  }
  doc["dims"] = per_dim;
  doc["satisfied"] = report.all_satisfied();
  return doc.dump(2) + "\n";
}

}  // namespace feathom
