#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "feathom/analytics.hpp"
#include "feathom/error.hpp"
#include "feathom/pipelines.hpp"

namespace py = pybind11;
using namespace feathom;

namespace {

using Pair = std::pair<double, double>;

std::vector<PersistencePoint> to_points(const std::vector<Pair>& pairs, int dim) {
  std::vector<PersistencePoint> out;
  out.reserve(pairs.size());
  for (const auto& [b, d] : pairs) out.push_back({b, d, dim});
  return out;
}

PipelineOptions options(const std::string& activation, int max_dim, std::size_t jobs,
                        std::size_t vertex_cap) {
  PipelineOptions o;
  if (activation == "auto") {
    o.activation.kind = ActivationFn::Kind::GaussianAuto;
  } else if (activation == "raw") {
    o.activation.kind = ActivationFn::Kind::GaussianRaw;
  } else {
    throw InputError("activation must be 'auto' or 'raw', got '" + activation + "'");
  }
  o.max_dim = max_dim;
  o.jobs = jobs;
  o.vertex_cap = vertex_cap;
  return o;
}

py::dict curve_dict(const AnomalyCurve& c) {
  py::dict d;
  d["window_starts"] = c.window_starts;
  d["start_labels"] = c.start_labels;
  d["raw_scores"] = c.raw_scores;
  d["scores"] = c.scores;
  d["window"] = c.window;
  d["normalization"] = c.normalization;
  py::list warnings;
  for (const auto& w : c.warnings) warnings.append(py::make_tuple(w.start, w.message));
  d["warnings"] = warnings;
  return d;
}

AnomalyCurve curve_from_dict(const py::dict& d) {
  AnomalyCurve c;
  c.window_starts = d["window_starts"].cast<std::vector<std::size_t>>();
  c.start_labels = d["start_labels"].cast<std::vector<std::string>>();
  c.scores = d["scores"].cast<std::vector<double>>();
  c.raw_scores = d.contains("raw_scores") ? d["raw_scores"].cast<std::vector<double>>() : c.scores;
  c.window = d.contains("window") ? d["window"].cast<std::size_t>() : 0;
  return c;
}

}  // namespace

PYBIND11_MODULE(_feathom, m) {
  m.doc() = "Persistent homology of featured time series";

  auto base = py::register_exception<Error>(m, "FeathomError", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<BoundsError>(m, "BoundsError", base.ptr());
  py::register_exception<StructureError>(m, "StructureError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());

  py::class_<FeatureSet>(m, "FeatureSet")
      .def(py::init<>())
      .def(py::init<std::vector<std::string>, std::vector<std::string>>(), py::arg("zeroth"), py::arg("first"))
      .def_property_readonly("zeroth", &FeatureSet::zeroth)
      .def_property_readonly("first", &FeatureSet::first)
      .def_static("from_json", &feature_set_from_json, py::arg("text"))
      .def("__eq__", [](const FeatureSet& a, const FeatureSet& b) { return a == b; });

  py::class_<InfluenceVector>(m, "InfluenceVector")
      .def(py::init<const FeatureSet&>(), py::arg("schema"))
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("g0"), py::arg("g1"))
      .def_property_readonly("g0", &InfluenceVector::g0)
      .def_property_readonly("g1", &InfluenceVector::g1)
      .def_static("from_json", &influence_vector_from_json, py::arg("text"), py::arg("schema"))
      .def_static("sup_distance", &InfluenceVector::sup_distance)
      .def("__eq__", [](const InfluenceVector& a, const InfluenceVector& b) { return a == b; })
      .def("__repr__", [](const InfluenceVector& g) {
        return "InfluenceVector(g0=" + py::repr(py::cast(g.g0())).cast<std::string>() +
               ", g1=" + py::repr(py::cast(g.g1())).cast<std::string>() + ")";
      });

  py::class_<FeaturedSeries>(m, "FeaturedSeries")
      .def_static("parse", py::overload_cast<std::string_view, const FeatureSet&>(&parse_featured_series),
                  py::arg("text"), py::arg("schema"))
      .def_readonly("schema", &FeaturedSeries::schema)
      .def_property_readonly("timestamps", [](const FeaturedSeries& s) { return s.base.timestamps; })
      .def_property_readonly("values", [](const FeaturedSeries& s) { return s.base.values; })
      .def_readonly("feat0", &FeaturedSeries::feat0)
      .def_readonly("feat1", &FeaturedSeries::feat1)
      .def("to_csv", &serialize_featured_series)
      .def("window", &slice_window, py::arg("start"), py::arg("width"))
      .def("__len__", &FeaturedSeries::size)
      .def("__eq__", [](const FeaturedSeries& a, const FeaturedSeries& b) { return a == b; });

  m.def(
      "weighted_graph",
      [](const FeaturedSeries& s, const InfluenceVector& g) {
        const auto wg = build_weighted_graph(s, g);
        py::dict d;
        d["vertices"] = wg.skeleton.vertices;
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& e : wg.skeleton.edges) edges.emplace_back(e.a, e.b);
        d["edges"] = edges;
        d["edge_freq"] = wg.skeleton.edge_freq;
        d["vertex_weight"] = wg.vertex_weight;
        d["edge_weight"] = wg.edge_weight;
        return d;
      },
      py::arg("series"), py::arg("g"), "Skeleton and influence-weighted frequencies as a dict.");

  m.def(
      "distance_matrix",
      [](const FeaturedSeries& s, const InfluenceVector& g, const std::string& activation) {
        const auto wg = build_weighted_graph(s, g);
        const auto rho = options(activation, kDefaultMaxDim, 1, kDefaultVertexCap).activation.resolve(wg);
        const auto d = distance_matrix(wg, rho);
        std::vector<std::vector<double>> rows(d.size(), std::vector<double>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i)
          for (std::size_t j = 0; j < d.size(); ++j) rows[i][j] = d(i, j);
        return py::make_tuple(d.order, rows);
      },
      py::arg("series"), py::arg("g"), py::arg("activation") = "auto",
      "Returns (labels, matrix) of shortest-path distances.");

  m.def(
      "persistence",
      [](const FeaturedSeries& s, const InfluenceVector& g, int max_dim, bool representatives,
         const std::string& activation, std::size_t vertex_cap) {
        const auto dgm =
            featured_persistence(s, g, options(activation, max_dim, 1, vertex_cap), representatives);
        std::vector<std::tuple<int, double, double>> points;
        for (const auto& p : dgm.points) points.emplace_back(p.dim, p.birth, p.death);
        py::dict d;
        d["points"] = points;
        d["representatives"] = dgm.representative_labels();
        return d;
      },
      py::arg("series"), py::arg("g"), py::arg("max_dim") = kDefaultMaxDim, py::arg("representatives") = false,
      py::arg("activation") = "auto", py::arg("vertex_cap") = kDefaultVertexCap,
      "Diagram points as (dim, birth, death) with math.inf for essential classes.");

  m.def(
      "bottleneck_distance",
      [](const std::vector<Pair>& a, const std::vector<Pair>& b) {
        return bottleneck_distance(to_points(a, 0), to_points(b, 0));
      },
      py::arg("a"), py::arg("b"), "Bottleneck distance between two lists of (birth, death) pairs.");

  m.def(
      "landscape",
      [](const std::vector<Pair>& points, std::optional<double> cap_infinite) {
        std::vector<std::vector<Pair>> levels;
        for (const auto& level : persistence_landscape(to_points(points, 1), cap_infinite).levels) {
          levels.push_back(level.points);
        }
        return levels;
      },
      py::arg("points"), py::arg("cap_infinite") = py::none(), "Breakpoints of each landscape level.");

  m.def(
      "landscape_norm",
      [](const std::vector<Pair>& points, const std::string& which) {
        if (which != "sup" && which != "l1") throw InputError("norm must be 'sup' or 'l1'");
        return landscape_norm(persistence_landscape(to_points(points, 1)),
                              which == "sup" ? LandscapeNorm::SupSum : LandscapeNorm::L1Sum);
      },
      py::arg("points"), py::arg("which") = "sup");

  m.def(
      "diagram_stats",
      [](const std::vector<Pair>& points) {
        const auto st = diagram_stats(to_points(points, 1));
        py::dict d;
        d["count"] = st.count;
        if (st.longest) d["longest"] = *st.longest;
        if (st.shortest) d["shortest"] = *st.shortest;
        return d;
      },
      py::arg("points"));

  m.def("overlapping_percentage", &overlapping_percentage, py::arg("series"), py::arg("cycles"));

  m.def(
      "stock_preprocess",
      [](const std::vector<std::string>& dates, const std::vector<double>& closes, std::size_t n_bins,
         std::size_t n_delta_bins) {
        if (dates.size() != closes.size()) throw InputError("dates and closes differ in length");
        std::vector<PricePoint> prices;
        for (std::size_t i = 0; i < dates.size(); ++i) prices.push_back({dates[i], closes[i]});
        return stock_preprocess(prices, n_bins, n_delta_bins);
      },
      py::arg("dates"), py::arg("closes"), py::arg("n_bins") = 30, py::arg("n_delta_bins") = 4);

  m.def(
      "asc_curve",
      [](const FeaturedSeries& s, const InfluenceVector& g, std::size_t window, std::size_t step,
         std::size_t jobs) {
        AnomalyCurve curve;
        {
          py::gil_scoped_release release;
          curve = asc_curve(s, g, window, step, options("auto", kDefaultMaxDim, jobs, kDefaultVertexCap));
        }
        return curve_dict(curve);
      },
      py::arg("series"), py::arg("g"), py::arg("window"), py::arg("step") = 1, py::arg("jobs") = 1);

  m.def(
      "tasc_curve",
      [](const std::vector<py::dict>& curves) {
        std::vector<AnomalyCurve> in;
        for (const auto& c : curves) in.push_back(curve_from_dict(c));
        return curve_dict(tasc_curve(in));
      },
      py::arg("curves"));

  m.def(
      "music_stats_grid",
      [](const FeaturedSeries& s, const std::string& feature0, const std::string& feature1,
         const std::vector<double>& xs, const std::vector<double>& ys, std::size_t jobs) {
        std::vector<GridCell> grid;
        {
          py::gil_scoped_release release;
          grid = music_stats_grid(s, feature0, feature1, xs, ys,
                                  options("auto", kDefaultMaxDim, jobs, kDefaultVertexCap));
        }
        py::list out;
        for (const auto& c : grid) {
          py::dict d;
          d["x"] = c.x;
          d["y"] = c.y;
          if (c.stats) {
            d["count"] = c.stats->count;
            d["longest"] = c.stats->longest ? py::cast(*c.stats->longest) : py::none();
            d["shortest"] = c.stats->shortest ? py::cast(*c.stats->shortest) : py::none();
            d["sup_sum"] = c.sup_sum;
            d["l1_sum"] = c.l1_sum;
            d["overlap_pct"] = c.overlap_pct;
          } else {
            d["error"] = c.error;
          }
          out.append(d);
        }
        return out;
      },
      py::arg("series"), py::arg("feature0"), py::arg("feature1"), py::arg("xs"), py::arg("ys"),
      py::arg("jobs") = 1);

  m.def(
      "stability_check",
      [](const FeaturedSeries& s, const InfluenceVector& g, const InfluenceVector& g2,
         const std::vector<int>& dims) {
        const auto r = stability_check(s, g, g2, ActivationSpec{}, dims);
        py::dict d;
        d["bound_constant"] = r.constants.proof;
        d["statement_constant"] = r.constants.statement;
        d["lipschitz_k"] = r.lipschitz_k;
        d["g_delta"] = r.g_delta;
        d["bound"] = r.bound;
        d["dims"] = r.dims;
        d["bottleneck"] = r.bottleneck;
        d["satisfied"] = r.all_satisfied();
        return d;
      },
      py::arg("series"), py::arg("g"), py::arg("g2"), py::arg("dims") = std::vector<int>{0, 1});

  m.attr("EMPTY_ZEROTH") = std::string(kEmptyZeroth);
  m.attr("EMPTY_FIRST") = std::string(kEmptyFirst);
}
