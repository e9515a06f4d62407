#include "feathom/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "text_util.hpp"

namespace feathom {

namespace {

using Column = std::vector<std::size_t>;  // sorted filtration indices

std::uint64_t simplex_key(const Simplex& s) {
  std::uint64_t key = static_cast<std::uint64_t>(s.dim);
  for (int i = 0; i <= s.dim; ++i) key = (key << 15) | (s.vertices[i] + 1);
  return key;
}

std::uint64_t face_key(const Simplex& s, int skip) {
  std::uint64_t key = static_cast<std::uint64_t>(s.dim - 1);
  for (int i = 0; i <= s.dim; ++i) {
    if (i == skip) continue;
    key = (key << 15) | (s.vertices[i] + 1);
  }
  return key;
}

// a ^= b over Z/2.
void add_column(Column& a, const Column& b) {
  Column out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  a.swap(out);
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool simplex_less(const Simplex& x, const Simplex& y) {
  if (x.value != y.value) return x.value < y.value;
  if (x.dim != y.dim) return x.dim < y.dim;
  return std::lexicographical_compare(x.vertices.begin(), x.vertices.begin() + x.dim + 1,
                                      y.vertices.begin(), y.vertices.begin() + y.dim + 1);
}

Cycle make_cycle(const Filtration& f, const Column& edges) {
  Cycle c;
  std::map<std::size_t, std::vector<std::size_t>> adjacency;
  for (auto idx : edges) {
    const auto& s = f.simplices[idx];
    const Edge e{s.vertices[0], s.vertices[1]};
    c.edges.push_back(e);
    adjacency[e.a].push_back(e.b);
    adjacency[e.b].push_back(e.a);
  }
  const bool simple = std::all_of(adjacency.begin(), adjacency.end(),
                                  [](const auto& kv) { return kv.second.size() == 2; });
  if (simple && !adjacency.empty()) {
    std::vector<std::size_t> walk{adjacency.begin()->first};
    std::size_t prev = walk.front();
    std::size_t cur = std::min(adjacency.begin()->second[0], adjacency.begin()->second[1]);
    while (cur != walk.front()) {
      walk.push_back(cur);
      const auto& nb = adjacency[cur];
      const std::size_t next = nb[0] == prev ? nb[1] : nb[0];
      prev = cur;
      cur = next;
    }
    if (walk.size() == adjacency.size()) {
      c.vertices = std::move(walk);
      return c;
    }
  }
  for (const auto& [v, _] : adjacency) c.vertices.push_back(v);
  return c;
}

}  // namespace

std::size_t rips_simplex_count(std::size_t n_vertices, int max_dim) {
  std::size_t total = 0;
  for (int k = 0; k <= max_dim; ++k) total += binomial(n_vertices, static_cast<std::size_t>(k + 1));
  return total;
}

Filtration rips_filtration(const DistanceMatrix& d, int max_dim, std::size_t vertex_cap) {
  if (max_dim < 1 || max_dim > 3) throw InputError("max_dim must lie in [1, 3]");
  const std::size_t n = d.size();
  if (n == 0) throw InputError("empty metric space");
  if (n > vertex_cap || n >= (1u << 15) - 1) {
    throw ResourceError("Rips filtration on " + std::to_string(n) + " vertices would generate " +
                        std::to_string(rips_simplex_count(n, max_dim)) +
                        " simplices; vertex cap is " + std::to_string(vertex_cap));
  }
  const int top = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(max_dim), n - 1));

  Filtration f;
  f.labels = d.order;
  f.max_dim = max_dim;
  f.simplices.reserve(rips_simplex_count(n, top));

  for (std::uint32_t v = 0; v < n; ++v) {
    Simplex s;
    s.vertices[0] = v;
    f.simplices.push_back(s);
  }
  // Grow simplices one vertex at a time; the value of a coface is the max of
  // its face's value and the distances from the new vertex.
  std::vector<Simplex> frontier(f.simplices.begin(), f.simplices.end());
  for (int dim = 1; dim <= top; ++dim) {
    std::vector<Simplex> next;
    for (const auto& s : frontier) {
      for (std::uint32_t v = s.vertices[s.dim] + 1; v < n; ++v) {
        Simplex t = s;
        t.dim = dim;
        t.vertices[dim] = v;
        for (int i = 0; i < dim; ++i) t.value = std::max(t.value, d(s.vertices[i], v));
        next.push_back(t);
      }
    }
    f.simplices.insert(f.simplices.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::sort(f.simplices.begin(), f.simplices.end(), simplex_less);
  return f;
}

PersistenceDiagram persistence_diagrams(const Filtration& f, const PersistenceOptions& options) {
  const std::size_t count = f.simplices.size();
  std::unordered_map<std::uint64_t, std::size_t> index_of;
  index_of.reserve(count * 2);
  int top = 0;
  for (std::size_t i = 0; i < count; ++i) {
    index_of.emplace(simplex_key(f.simplices[i]), i);
    top = std::max(top, f.simplices[i].dim);
  }

  std::vector<std::vector<std::size_t>> by_dim(static_cast<std::size_t>(top) + 1);
  for (std::size_t i = 0; i < count; ++i) by_dim[f.simplices[i].dim].push_back(i);

  auto boundary = [&](std::size_t idx) {
    const auto& s = f.simplices[idx];
    Column col;
    if (s.dim == 0) return col;
    for (int skip = 0; skip <= s.dim; ++skip) col.push_back(index_of.at(face_key(s, skip)));
    std::sort(col.begin(), col.end());
    return col;
  };

  std::vector<Column> reduced(count);
  std::vector<Column> kernel(count);  // V columns, dim 1 only, when requested
  std::vector<std::optional<std::size_t>> owner(count);  // pivot row -> column
  std::vector<bool> cleared(count, false);
  std::vector<bool> is_pivot_row(count, false);

  for (int dim = top; dim >= 1; --dim) {
    const bool track = options.representatives && dim == 1;
    for (auto j : by_dim[dim]) {
      if (cleared[j]) continue;
      Column col = boundary(j);
      Column v;
      if (track) v.push_back(j);
      while (!col.empty()) {
        const auto low = col.back();
        if (!owner[low]) break;
        add_column(col, reduced[*owner[low]]);
        if (track) add_column(v, kernel[*owner[low]]);
      }
      if (!col.empty()) {
        const auto low = col.back();
        owner[low] = j;
        is_pivot_row[low] = true;
        cleared[low] = true;
      }
      reduced[j] = std::move(col);
      if (track) kernel[j] = std::move(v);
    }
  }

  const int reported_top = options.include_top_dimension ? f.max_dim : f.max_dim - 1;

  struct Raw {
    PersistencePoint point;
    std::optional<Column> cycle;
  };
  std::vector<Raw> raw;
  for (std::size_t j = 0; j < count; ++j) {
    const auto& s = f.simplices[j];
    if (s.dim > reported_top) continue;
    if (is_pivot_row[j]) {
      const auto killer = *owner[j];
      const double birth = s.value, death = f.simplices[killer].value;
      if (s.dim >= 1 && death == birth) continue;
      Raw r{{birth, death, s.dim}, std::nullopt};
      if (options.representatives && s.dim == 1) r.cycle = reduced[killer];
      raw.push_back(std::move(r));
    } else if (reduced[j].empty()) {
      Raw r{{s.value, kInfinity, s.dim}, std::nullopt};
      if (options.representatives && s.dim == 1) r.cycle = kernel[j];
      raw.push_back(std::move(r));
    }
  }
  std::stable_sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
    if (a.point.dim != b.point.dim) return a.point.dim < b.point.dim;
    if (a.point.birth != b.point.birth) return a.point.birth < b.point.birth;
    return a.point.death < b.point.death;
  });

  PersistenceDiagram dgm;
  dgm.labels = f.labels;
  dgm.points.reserve(raw.size());
  for (auto& r : raw) {
    if (r.cycle) dgm.representatives.emplace(dgm.points.size(), make_cycle(f, *r.cycle));
    dgm.points.push_back(r.point);
  }
  return dgm;
}

std::map<std::size_t, Cycle> representative_cycles(const Filtration& f) {
  PersistenceOptions options;
  options.representatives = true;
  return persistence_diagrams(f, options).representatives;
}

std::vector<PersistencePoint> PersistenceDiagram::dimension(int dim) const {
  std::vector<PersistencePoint> out;
  for (const auto& p : points) {
    if (p.dim == dim) out.push_back(p);
  }
  return out;
}

std::vector<std::vector<std::string>> PersistenceDiagram::representative_labels() const {
  std::vector<std::vector<std::string>> out;
  for (const auto& [_, cycle] : representatives) {
    std::vector<std::string> names;
    for (auto v : cycle.vertices) names.push_back(labels.at(v));
    out.push_back(std::move(names));
  }
  return out;
}

std::string diagram_to_csv(const std::vector<PersistencePoint>& points) {
  std::string out = "dim,birth,death\n";
  for (const auto& p : points) {
    out += std::to_string(p.dim) + "," + detail::format_number(p.birth) + "," +
           detail::format_number(p.death) + "\n";
  }
  return out;
}

std::vector<PersistencePoint> diagram_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty diagram file");
  detail::strip_cr(line);
  if (detail::trim(detail::strip_bom(line)) != "dim,birth,death") {
    throw FormatError("expected header dim,birth,death");
  }
  std::vector<PersistencePoint> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    detail::strip_cr(line);
    if (detail::trim(line).empty()) continue;
    ++row;
    auto cells = detail::split(line, ',');
    if (cells.size() != 3) throw FormatError("diagram row " + std::to_string(row) + " needs 3 cells");
    try {
      PersistencePoint p;
      p.dim = std::stoi(std::string(detail::trim(cells[0])));
      p.birth = std::stod(std::string(detail::trim(cells[1])));
      const std::string death(detail::trim(cells[2]));
      p.death = death == "inf" ? kInfinity : std::stod(death);
      if (p.death < p.birth) throw FormatError("death before birth at diagram row " + std::to_string(row));
      out.push_back(p);
    } catch (const std::logic_error&) {
      throw FormatError("unparseable diagram row " + std::to_string(row));
    }
  }
  return out;
}

std::string representatives_to_json(const PersistenceDiagram& dgm) {
  nlohmann::json doc = dgm.representative_labels();
  return doc.dump() + "\n";
}

}  // namespace feathom
