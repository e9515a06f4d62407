#include "feathom/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "text_util.hpp"

namespace feathom {

namespace {

// Hopcroft–Karp on a bipartite graph with equal sides; returns true when a
// perfect matching exists.
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(std::size_t n) : n_(n), adj_(n) {}

  void add_edge(std::size_t left, std::size_t right) { adj_[left].push_back(right); }

  bool perfect() {
    match_left_.assign(n_, kNone);
    match_right_.assign(n_, kNone);
    std::size_t matched = 0;
    while (bfs()) {
      for (std::size_t u = 0; u < n_; ++u) {
        if (match_left_[u] == kNone && dfs(u)) ++matched;
      }
    }
    return matched == n_;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool bfs() {
    dist_.assign(n_, kNone);
    std::queue<std::size_t> q;
    for (std::size_t u = 0; u < n_; ++u) {
      if (match_left_[u] == kNone) {
        dist_[u] = 0;
        q.push(u);
      }
    }
    bool found = false;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto v : adj_[u]) {
        const auto w = match_right_[v];
        if (w == kNone) {
          found = true;
        } else if (dist_[w] == kNone) {
          dist_[w] = dist_[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t u) {
    for (auto v : adj_[u]) {
      const auto w = match_right_[v];
      if (w == kNone || (dist_[w] == dist_[u] + 1 && dfs(w))) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    dist_[u] = kNone;
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_left_, match_right_, dist_;
};

double linf(const PersistencePoint& p, const PersistencePoint& q) {
  return std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
}

double diagonal_cost(const PersistencePoint& p) { return (p.death - p.birth) / 2.0; }

bool matchable(const std::vector<PersistencePoint>& a, const std::vector<PersistencePoint>& b,
               double r) {
  const std::size_t n = a.size(), m = b.size();
  // Left: a_0..a_{n-1}, then diagonal images of b. Right: b_0..b_{m-1}, then
  // diagonal images of a.
  BipartiteMatcher matcher(n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (linf(a[i], b[j]) <= r) matcher.add_edge(i, j);
    }
    if (diagonal_cost(a[i]) <= r) matcher.add_edge(i, m + i);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (diagonal_cost(b[j]) <= r) matcher.add_edge(n + j, j);
    for (std::size_t i = 0; i < n; ++i) matcher.add_edge(n + j, m + i);
  }
  return matcher.perfect();
}

std::vector<double> tent_values(const std::vector<PersistencePoint>& points, double x) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(std::max(0.0, std::min(x - p.birth, p.death - x)));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

bool collinear(const std::pair<double, double>& p, const std::pair<double, double>& q,
               const std::pair<double, double>& r) {
  const double cross = (q.first - p.first) * (r.second - p.second) -
                       (q.second - p.second) * (r.first - p.first);
  const double scale = std::max({1.0, std::abs(r.first - p.first), std::abs(r.second - p.second)});
  return std::abs(cross) <= 1e-14 * scale * scale;
}

}  // namespace

double bottleneck_distance(const std::vector<PersistencePoint>& a,
                           const std::vector<PersistencePoint>& b) {
  std::vector<PersistencePoint> fa, fb;
  std::vector<double> ia, ib;
  for (const auto& p : a) (p.finite() ? fa.push_back(p) : ia.push_back(p.birth));
  for (const auto& p : b) (p.finite() ? fb.push_back(p) : ib.push_back(p.birth));
  if (ia.size() != ib.size()) return kInfinity;

  // Essential classes: matching sorted births is optimal on the line.
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());
  double essential = 0.0;
  for (std::size_t i = 0; i < ia.size(); ++i) essential = std::max(essential, std::abs(ia[i] - ib[i]));

  std::vector<double> candidates{0.0};
  for (const auto& p : fa) {
    candidates.push_back(diagonal_cost(p));
    for (const auto& q : fb) candidates.push_back(linf(p, q));
  }
  for (const auto& q : fb) candidates.push_back(diagonal_cost(q));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (matchable(fa, fb, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return std::max(essential, candidates[lo]);
}

double LandscapeLevel::operator()(double x) const {
  if (points.empty() || x < points.front().first || x > points.back().first) return 0.0;
  auto hi = std::upper_bound(points.begin(), points.end(), x,
                             [](double v, const auto& p) { return v < p.first; });
  if (hi == points.end()) return points.back().second;
  auto lo = hi - 1;
  const double t = (x - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

double LandscapeLevel::sup() const {
  double out = 0.0;
  for (const auto& [_, y] : points) out = std::max(out, y);
  return out;
}

double LandscapeLevel::integral() const {
  double out = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    out += (points[i].first - points[i - 1].first) * (points[i].second + points[i - 1].second) / 2.0;
  }
  return out;
}

double Landscape::value(std::size_t k, double x) const {
  if (k == 0 || k > levels.size()) return 0.0;
  return levels[k - 1](x);
}

Landscape persistence_landscape(const std::vector<PersistencePoint>& points,
                                std::optional<double> cap_infinite) {
  std::vector<PersistencePoint> finite;
  for (auto p : points) {
    if (!p.finite()) {
      if (!cap_infinite) continue;
      p.death = *cap_infinite;
    }
    if (p.death > p.birth) finite.push_back(p);
  }
  Landscape out;
  if (finite.empty()) return out;

  // Every tent is linear between these abscissae and no two tent pieces
  // cross inside an interval, so each level is linear there too.
  std::vector<double> xs;
  for (const auto& p : finite) {
    xs.push_back(p.birth);
    xs.push_back(p.death);
    for (const auto& q : finite) {
      const double x = (p.birth + q.death) / 2.0;
      xs.push_back(x);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const std::size_t depth = finite.size();
  std::vector<LandscapeLevel> levels(depth);
  for (double x : xs) {
    const auto values = tent_values(finite, x);
    for (std::size_t k = 0; k < depth; ++k) levels[k].points.emplace_back(x, values[k]);
  }

  for (auto& level : levels) {
    auto& pts = level.points;
    // Trim to the support, keeping one zero on either side.
    std::size_t first = 0, last = pts.size();
    while (first < pts.size() && pts[first].second <= 0.0) ++first;
    if (first == pts.size()) {
      pts.clear();
      continue;
    }
    while (last > 0 && pts[last - 1].second <= 0.0) --last;
    first = first > 0 ? first - 1 : 0;
    last = std::min(last + 1, pts.size());
    std::vector<std::pair<double, double>> kept;
    for (std::size_t i = first; i < last; ++i) {
      if (kept.size() >= 2 && collinear(kept[kept.size() - 2], kept.back(), pts[i])) {
        kept.back() = pts[i];
      } else {
        kept.push_back(pts[i]);
      }
    }
    pts = std::move(kept);
  }
  for (auto& level : levels) {
    if (!level.points.empty()) out.levels.push_back(std::move(level));
  }
  return out;
}

double landscape_norm(const Landscape& landscape, LandscapeNorm which) {
  double out = 0.0;
  for (const auto& level : landscape.levels) {
    out += which == LandscapeNorm::SupSum ? level.sup() : level.integral();
  }
  return out;
}

std::string landscape_to_csv(const Landscape& landscape) {
  std::string out = "k,x,y\n";
  for (std::size_t k = 0; k < landscape.levels.size(); ++k) {
    for (const auto& [x, y] : landscape.levels[k].points) {
      out += std::to_string(k + 1) + "," + detail::format_number(x) + "," +
             detail::format_number(y) + "\n";
    }
  }
  return out;
}

DiagramStats diagram_stats(const std::vector<PersistencePoint>& points) {
  DiagramStats stats;
  for (const auto& p : points) {
    if (!p.finite()) continue;
    const double pers = p.persistence();
    stats.longest = stats.longest ? std::max(*stats.longest, pers) : pers;
    stats.shortest = stats.shortest ? std::min(*stats.shortest, pers) : pers;
    ++stats.count;
  }
  return stats;
}

std::string stats_to_json(const DiagramStats& stats) {
  nlohmann::ordered_json doc;
  doc["count"] = stats.count;
  doc["longest"] = stats.longest ? nlohmann::ordered_json(*stats.longest) : nlohmann::ordered_json();
  doc["shortest"] = stats.shortest ? nlohmann::ordered_json(*stats.shortest) : nlohmann::ordered_json();
  return doc.dump(2) + "\n";
}

double overlapping_percentage(const FeaturedSeries& series,
                              const std::vector<std::vector<std::string>>& cycles) {
  std::unordered_map<std::string, std::size_t> membership;
  for (const auto& cycle : cycles) {
    const std::set<std::string> unique(cycle.begin(), cycle.end());
    for (const auto& v : unique) ++membership[v];
  }
  std::size_t covered = 0, shared = 0;
  for (const auto& value : series.base.values) {
    auto it = membership.find(value);
    if (it == membership.end()) continue;
    ++covered;
    if (it->second >= 2) ++shared;
  }
  if (covered == 0) return 0.0;
  return 100.0 * static_cast<double>(shared) / static_cast<double>(covered);
}

}  // namespace feathom
