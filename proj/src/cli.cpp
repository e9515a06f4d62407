#include "feathom/cli.hpp"

#include <cstdlib>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "feathom/analytics.hpp"
#include "feathom/io.hpp"
#include "feathom/pipelines.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace feathom::cli {

namespace {

struct Options {
  std::string input;
  std::string schema;
  std::string influence;
  std::string influence2;
  std::vector<std::string> overrides;
  std::string activation = "auto";
  std::string rho_table;
  double lipschitz = 0.0;
  int max_dim = kDefaultMaxDim;
  std::size_t jobs = 1;
  std::string out;
  std::string format = "csv";

  // ph
  std::string reps_out;
  // landscape / bottleneck
  std::string diagram;
  std::string diagram_b;
  int dim = 1;
  std::optional<double> cap_infinite;
  std::string stats_out;
  // asc / tasc
  std::string prices;
  std::size_t window = 0;
  std::size_t step = 1;
  std::size_t bins = 30;
  std::size_t delta_bins = 4;
  std::vector<std::string> curves;
  // music-grid
  std::string feature0;
  std::string feature1;
  std::string x_values;
  std::string y_values;
  // stability
  std::string dims = "0,1";
  std::size_t trials = 0;
  double delta = 0.01;
  std::uint64_t seed = 20240917;

  std::ostream* diagnostics = nullptr;  // non-fatal warnings
};

std::size_t vertex_cap() {
  if (const char* env = std::getenv("FEATHOM_CAP")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
    }
    throw InputError(std::string("FEATHOM_CAP must be a positive integer, got '") + env + "'");
  }
  return kDefaultVertexCap;
}

std::vector<double> parse_values(const std::string& spec) {
  std::vector<double> out;
  try {
    // start:stop:step, inclusive of stop up to rounding.
    if (spec.find(':') != std::string::npos) {
      auto parts = detail::split(spec, ':');
      if (parts.size() != 3) throw InputError("range must be start:stop:step");
      const double start = std::stod(std::string(parts[0]));
      const double stop = std::stod(std::string(parts[1]));
      const double step = std::stod(std::string(parts[2]));
      if (!(step > 0.0)) throw InputError("range step must be positive");
      const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
      for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
      return out;
    }
    for (auto token : detail::split(spec, ',')) {
      token = detail::trim(token);
      if (!token.empty()) out.push_back(std::stod(std::string(token)));
    }
  } catch (const std::logic_error&) {
    throw InputError("cannot parse value list '" + spec + "'");
  }
  if (out.empty()) throw InputError("empty value list");
  return out;
}

std::vector<int> parse_dims(const std::string& spec) {
  std::vector<int> out;
  for (double v : parse_values(spec)) out.push_back(static_cast<int>(v));
  return out;
}

ActivationSpec activation_spec(const Options& o) {
  ActivationSpec spec;
  if (o.activation == "auto") {
    spec.kind = ActivationFn::Kind::GaussianAuto;
  } else if (o.activation == "raw") {
    spec.kind = ActivationFn::Kind::GaussianRaw;
  } else {
    spec.kind = ActivationFn::Kind::CustomTable;
    if (o.rho_table.empty()) throw InputError("--activation table requires --rho-table");
    std::istringstream in(read_text_file(o.rho_table));
    std::string line;
    std::getline(in, line);  // header z,rho
    while (std::getline(in, line)) {
      detail::strip_cr(line);
      if (detail::trim(line).empty()) continue;
      auto cells = detail::split(line, ',');
      if (cells.size() != 2) throw FormatError("activation table rows need 2 cells");
      try {
        spec.table.emplace_back(std::stod(std::string(cells[0])), std::stod(std::string(cells[1])));
      } catch (const std::logic_error&) {
        throw FormatError("unparseable activation table row '" + line + "'");
      }
    }
    spec.lipschitz_k = o.lipschitz;
  }
  return spec;
}

PipelineOptions pipeline_options(const Options& o) {
  PipelineOptions p;
  p.activation = activation_spec(o);
  p.max_dim = o.max_dim;
  p.vertex_cap = vertex_cap();
  p.jobs = o.jobs;
  return p;
}

FeatureSet load_schema(const Options& o) {
  if (o.schema.empty()) return FeatureSet();
  return feature_set_from_json(read_text_file(o.schema));
}

void apply_overrides(InfluenceVector& g, const FeatureSet& schema,
                     const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    const auto dot = item.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw InputError("override must look like g0.NAME=VALUE or g1.NAME=VALUE, got '" + item + "'");
    }
    const std::string part = item.substr(0, dot);
    const std::string name = item.substr(dot + 1, eq - dot - 1);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw InputError("override value is not a number in '" + item + "'");
    }
    if (part == "g0") {
      if (name == kEmptyZeroth) {
        g.set_g0(0, value);
      } else if (auto idx = schema.find_zeroth(name)) {
        g.set_g0(*idx + 1, value);
      } else {
        throw SchemaError("unknown feature " + name + " in override");
      }
    } else if (part == "g1") {
      if (name == kEmptyFirst) {
        g.set_g1(0, value);
      } else if (auto idx = schema.find_first(name)) {
        g.set_g1(*idx + 1, value);
      } else {
        throw SchemaError("unknown feature " + name + " in override");
      }
    } else {
      throw InputError("override must start with g0. or g1., got '" + item + "'");
    }
  }
}

InfluenceVector load_influence(const std::string& path, const FeatureSet& schema,
                               const std::vector<std::string>& overrides) {
  InfluenceVector g = path.empty() ? InfluenceVector(schema)
                                   : influence_vector_from_json(read_text_file(path), schema);
  apply_overrides(g, schema, overrides);
  return g;
}

FeaturedSeries load_series(const Options& o, const FeatureSet& schema) {
  auto series = parse_featured_series(read_text_file(o.input), schema);
  series.validate();
  if (o.diagnostics && !at_most_one_first_feature(series)) {
    *o.diagnostics << "feathom: warning: some timestamps carry several first features; edge weights at zero "
                 "influence will exceed raw edge frequencies\n";
  }
  return series;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_text_file(o.out, text);
  }
}

std::string diagram_json(const PersistenceDiagram& dgm) {
  nlohmann::ordered_json doc;
  auto points = nlohmann::ordered_json::array();
  for (const auto& p : dgm.points) {
    nlohmann::ordered_json j;
    j["dim"] = p.dim;
    j["birth"] = p.birth;
    j["death"] = p.finite() ? nlohmann::ordered_json(p.death) : nlohmann::ordered_json("inf");
    points.push_back(j);
  }
  doc["points"] = points;
  doc["representatives"] = dgm.representative_labels();
  return doc.dump(2) + "\n";
}

int cmd_graph(const Options& o, std::ostream& out) {
  const auto schema = load_schema(o);
  const auto series = load_series(o, schema);
  const auto g = load_influence(o.influence, schema, o.overrides);
  const auto skeleton = build_skeleton(series);
  const auto counts = count_matrices(series, skeleton);
  const auto weighted = weighted_graph(skeleton, counts, g);
  emit(o, out, graph_to_json(skeleton, counts, &weighted));
  return 0;
}

int cmd_distances(const Options& o, std::ostream& out) {
  const auto schema = load_schema(o);
  const auto series = load_series(o, schema);
  const auto g = load_influence(o.influence, schema, o.overrides);
  const auto graph = build_weighted_graph(series, g);
  const auto d = distance_matrix(graph, activation_spec(o).resolve(graph));
  if (o.format == "json") {
    nlohmann::ordered_json doc;
    doc["order"] = d.order;
    doc["values"] = d.values;
    emit(o, out, doc.dump(2) + "\n");
  } else {
    emit(o, out, distance_matrix_to_csv(d));
  }
  return 0;
}

int cmd_ph(const Options& o, std::ostream& out) {
  const auto schema = load_schema(o);
  const auto series = load_series(o, schema);
  const auto g = load_influence(o.influence, schema, o.overrides);
  const bool reps = !o.reps_out.empty() || o.format == "json";
  const auto dgm = featured_persistence(series, g, pipeline_options(o), reps);
  emit(o, out, o.format == "json" ? diagram_json(dgm) : diagram_to_csv(dgm.points));
  if (!o.reps_out.empty()) write_text_file(o.reps_out, representatives_to_json(dgm));
  return 0;
}

int cmd_landscape(const Options& o, std::ostream& out) {
  const auto points = diagram_from_csv(read_text_file(o.diagram));
  std::vector<PersistencePoint> selected;
  for (const auto& p : points) {
    if (p.dim == o.dim) selected.push_back(p);
  }
  const auto landscape = persistence_landscape(selected, o.cap_infinite);
  emit(o, out, landscape_to_csv(landscape));
  if (!o.stats_out.empty()) {
    auto stats = nlohmann::ordered_json::parse(stats_to_json(diagram_stats(selected)));
    stats["sup_sum"] = landscape_norm(landscape, LandscapeNorm::SupSum);
    stats["l1_sum"] = landscape_norm(landscape, LandscapeNorm::L1Sum);
    write_text_file(o.stats_out, stats.dump(2) + "\n");
  }
  return 0;
}

int cmd_bottleneck(const Options& o, std::ostream& out) {
  auto select = [&](const std::string& path) {
    std::vector<PersistencePoint> selected;
    for (const auto& p : diagram_from_csv(read_text_file(path))) {
      if (p.dim == o.dim) selected.push_back(p);
    }
    return selected;
  };
  const double d = bottleneck_distance(select(o.diagram), select(o.diagram_b));
  if (o.format == "json") {
    nlohmann::ordered_json doc;
    doc["dim"] = o.dim;
    doc["bottleneck"] = std::isinf(d) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(d);
    emit(o, out, doc.dump(2) + "\n");
  } else {
    emit(o, out, detail::format_number(d) + "\n");
  }
  return 0;
}

int cmd_asc(const Options& o, std::ostream& out, std::ostream& err) {
  FeaturedSeries series;
  FeatureSet schema;
  if (!o.prices.empty()) {
    series = stock_preprocess(parse_price_csv(read_text_file(o.prices)), o.bins, o.delta_bins);
    schema = series.schema;
  } else if (!o.input.empty()) {
    schema = load_schema(o);
    series = load_series(o, schema);
  } else {
    throw InputError("asc needs --prices or --input");
  }
  const auto g = load_influence(o.influence, schema, o.overrides);
  const auto curve = asc_curve(series, g, o.window, o.step, pipeline_options(o));
  for (const auto& w : curve.warnings) {
    err << "feathom: warning: window " << w.start << " scored 0: " << w.message << "\n";
  }
  emit(o, out, curve_to_csv(curve));
  return 0;
}

int cmd_tasc(const Options& o, std::ostream& out) {
  std::vector<AnomalyCurve> curves;
  for (const auto& path : o.curves) curves.push_back(curve_from_csv(read_text_file(path)));
  emit(o, out, curve_to_csv(tasc_curve(curves)));
  return 0;
}

int cmd_music_grid(const Options& o, std::ostream& out) {
  const auto schema = load_schema(o);
  const auto series = load_series(o, schema);
  const auto grid = music_stats_grid(series, o.feature0, o.feature1, parse_values(o.x_values),
                                     parse_values(o.y_values), pipeline_options(o));
  emit(o, out, grid_to_csv(grid));
  return 0;
}

int cmd_stability(const Options& o, std::ostream& out) {
  const auto schema = load_schema(o);
  const auto series = load_series(o, schema);
  const auto g = load_influence(o.influence, schema, o.overrides);
  const auto options = pipeline_options(o);
  const auto dims = parse_dims(o.dims);

  if (!o.influence2.empty()) {
    const auto g2 = load_influence(o.influence2, schema, {});
    emit(o, out, stability_report_to_json(stability_check(series, g, g2, options.activation, dims, options)));
    return 0;
  }
  if (o.trials == 0) throw InputError("stability needs --g2 or --trials");

  // Random perturbations of g with sup-norm at most `delta`.
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> jitter(-o.delta, o.delta);
  nlohmann::ordered_json doc;
  auto reports = nlohmann::ordered_json::array();
  std::size_t passed = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    auto g0 = g.g0();
    auto g1 = g.g1();
    for (auto& v : g0) v = std::max(0.0, v + jitter(rng));
    for (auto& v : g1) v = std::max(0.0, v + jitter(rng));
    const auto report =
        stability_check(series, g, InfluenceVector(g0, g1), options.activation, dims, options);
    passed += report.all_satisfied() ? 1 : 0;
    reports.push_back(nlohmann::ordered_json::parse(stability_report_to_json(report)));
  }
  doc["seed"] = o.seed;
  doc["trials"] = o.trials;
  doc["passed"] = passed;
  doc["satisfied"] = passed == o.trials;
  doc["reports"] = reports;
  emit(o, out, doc.dump(2) + "\n");
  return 0;
}

void add_series_options(CLI::App* cmd, Options& o, bool input_required = true) {
  auto* in = cmd->add_option("--input", o.input, "Featured series CSV (t,value,f0,f1)")
                 ->check(CLI::ExistingFile);
  if (input_required) in->required();
  cmd->add_option("--schema", o.schema, "JSON with features0 / features1")->check(CLI::ExistingFile);
}

void add_influence_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--g", o.influence, "Influence vector JSON (g0 / g1 maps)")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "Inline influence override, g0.NAME=V or g1.NAME=V");
}

void add_metric_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--activation", o.activation, "Activation: auto, raw or table")
      ->check(CLI::IsMember({"auto", "raw", "table"}));
  cmd->add_option("--rho-table", o.rho_table, "CSV z,rho breakpoints for --activation table")
      ->check(CLI::ExistingFile);
  cmd->add_option("--lipschitz", o.lipschitz, "Lipschitz bound of the table activation");
}

void add_ph_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-dim", o.max_dim, "Top simplex dimension (homology up to max-dim - 1)")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Persistent homology of featured time series", "feathom"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "Seed for randomized runs");

  auto* graph = app.add_subcommand("graph", "Dump the weighted graph and count matrices as JSON");
  add_series_options(graph, o);
  add_influence_options(graph, o);

  auto* distances = app.add_subcommand("distances", "Export the distance matrix");
  add_series_options(distances, o);
  add_influence_options(distances, o);
  add_metric_options(distances, o);

  auto* ph = app.add_subcommand("ph", "Persistence diagrams of a featured series");
  add_series_options(ph, o);
  add_influence_options(ph, o);
  add_metric_options(ph, o);
  add_ph_options(ph, o);
  ph->add_option("--reps", o.reps_out, "Write dim-1 representative cycles as JSON");

  auto* landscape = app.add_subcommand("landscape", "Persistence landscape of a diagram CSV");
  landscape->add_option("--diagram", o.diagram, "Diagram CSV (dim,birth,death)")
      ->required()
      ->check(CLI::ExistingFile);
  landscape->add_option("--dim", o.dim, "Homology dimension");
  landscape->add_option("--cap-infinite", o.cap_infinite, "Truncate infinite deaths at this value");
  landscape->add_option("--stats", o.stats_out, "Write diagram statistics and norms as JSON");

  auto* bottleneck = app.add_subcommand("bottleneck", "Bottleneck distance between two diagrams");
  bottleneck->add_option("--a", o.diagram, "First diagram CSV")->required()->check(CLI::ExistingFile);
  bottleneck->add_option("--b", o.diagram_b, "Second diagram CSV")->required()->check(CLI::ExistingFile);
  bottleneck->add_option("--dim", o.dim, "Homology dimension");

  auto* asc = app.add_subcommand("asc", "Sliding-window anomaly score curve");
  add_series_options(asc, o, /*input_required=*/false);
  asc->add_option("--prices", o.prices, "Price CSV (date,close)")->check(CLI::ExistingFile);
  add_influence_options(asc, o);
  add_metric_options(asc, o);
  add_ph_options(asc, o);
  asc->add_option("--w", o.window, "Window length")->required();
  asc->add_option("--step", o.step, "Window stride")->check(CLI::PositiveNumber);
  asc->add_option("--bins", o.bins, "Return bins")->check(CLI::PositiveNumber);
  asc->add_option("--delta-bins", o.delta_bins, "Return-difference bins")->check(CLI::PositiveNumber);

  auto* tasc = app.add_subcommand("tasc", "Product of aligned anomaly curves");
  tasc->add_option("--curves", o.curves, "Curve CSVs")->required()->check(CLI::ExistingFile);

  auto* grid = app.add_subcommand("music-grid", "Diagram statistics over an influence grid");
  add_series_options(grid, o);
  add_metric_options(grid, o);
  add_ph_options(grid, o);
  grid->add_option("--feature0", o.feature0, "Zeroth feature on the x axis")->required();
  grid->add_option("--feature1", o.feature1, "First feature on the y axis")->required();
  grid->add_option("--x", o.x_values, "x influences: list a,b,c or range start:stop:step")->required();
  grid->add_option("--y", o.y_values, "y influences: list a,b,c or range start:stop:step")->required();

  auto* stability = app.add_subcommand("stability", "Check the influence-vector stability bound");
  add_series_options(stability, o);
  add_influence_options(stability, o);
  add_metric_options(stability, o);
  add_ph_options(stability, o);
  stability->add_option("--g2", o.influence2, "Second influence vector JSON")->check(CLI::ExistingFile);
  stability->add_option("--dims", o.dims, "Dimensions to compare, e.g. 0,1");
  stability->add_option("--trials", o.trials, "Random perturbations of --g when --g2 is absent");
  stability->add_option("--delta", o.delta, "Perturbation size for --trials")->check(CLI::NonNegativeNumber);

  for (auto* cmd : {graph, distances, ph, landscape, bottleneck, asc, tasc, grid, stability}) {
    cmd->add_option("--out", o.out, "Output path (default: stdout)");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "feathom: " << e.what() << "\n" << app.help();
    return 2;
  }

  o.diagnostics = &err;
  try {
    if (*graph) return cmd_graph(o, out);
    if (*distances) return cmd_distances(o, out);
    if (*ph) return cmd_ph(o, out);
    if (*landscape) return cmd_landscape(o, out);
    if (*bottleneck) return cmd_bottleneck(o, out);
    if (*asc) return cmd_asc(o, out, err);
    if (*tasc) return cmd_tasc(o, out);
    if (*grid) return cmd_music_grid(o, out);
    if (*stability) return cmd_stability(o, out);
  } catch (const std::exception& e) {
    err << "feathom: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace feathom::cli
