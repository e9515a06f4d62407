#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "feathom/series.hpp"

namespace fixtures {

inline const std::vector<int> kPentagonValues = {21, 22, 23, 24, 25, 24, 23, 22, 21, 22, 23, 24, 25, 24,
                                                 23, 22, 21, 22, 23, 24, 25, 24, 23, 22, 21, 25, 21};

inline feathom::FeatureSet pentagon_schema() { return feathom::FeatureSet({"H", "L"}, {"1", "4"}); }

// Temperature-style annotation: H/L by value, |delta| to the next row as the
// first feature (the last row has none).
inline std::string pentagon_csv() {
  std::string out = "t,value,f0,f1\n";
  for (std::size_t i = 0; i < kPentagonValues.size(); ++i) {
    const int v = kPentagonValues[i];
    std::string f1;
    if (i + 1 < kPentagonValues.size()) f1 = std::to_string(std::abs(kPentagonValues[i + 1] - v));
    out += std::to_string(i) + "," + std::to_string(v) + "," + (v >= 23 ? "H" : "L") + "," + f1 + "\n";
  }
  return out;
}

inline feathom::FeaturedSeries pentagon() {
  return feathom::parse_featured_series(pentagon_csv(), pentagon_schema());
}

inline feathom::InfluenceVector pentagon_featured_g() {
  return feathom::InfluenceVector({0.0, 0.0, 0.0}, {0.0, 0.0, 5.0});
}

struct RandomSeriesOptions {
  std::size_t min_symbols = 5;
  std::size_t max_symbols = 15;
  std::size_t n_zeroth = 3;
  std::size_t n_first = 3;
  std::size_t min_length = 10;
  std::size_t max_length = 60;
};

// Random walk over a small alphabet. Each timestamp gets a random subset of
// zeroth features and at most one first feature.
inline feathom::FeaturedSeries random_series(std::mt19937_64& rng, const RandomSeriesOptions& o = {}) {
  std::vector<std::string> f0, f1;
  for (std::size_t i = 0; i < o.n_zeroth; ++i) f0.push_back("r" + std::to_string(i + 1));
  for (std::size_t i = 0; i < o.n_first; ++i) f1.push_back("s" + std::to_string(i + 1));
  feathom::FeaturedSeries s;
  s.schema = feathom::FeatureSet(f0, f1);

  const std::size_t symbols = std::uniform_int_distribution<std::size_t>(o.min_symbols, o.max_symbols)(rng);
  const std::size_t length =
      std::max(std::uniform_int_distribution<std::size_t>(o.min_length, o.max_length)(rng), symbols);
  // Visit every symbol once in a shuffled order so the alphabet is fully
  // used, then wander.
  std::vector<std::size_t> order(symbols);
  for (std::size_t i = 0; i < symbols; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> seq(order.begin(), order.end());
  std::uniform_int_distribution<std::size_t> pick(0, symbols - 1);
  while (seq.size() < length) seq.push_back(pick(rng));

  std::bernoulli_distribution coin(0.35);
  std::uniform_int_distribution<std::size_t> first_pick(0, o.n_first);  // n_first means none
  for (std::size_t i = 0; i < seq.size(); ++i) {
    s.base.timestamps.push_back(std::to_string(i));
    s.base.values.push_back("v" + std::to_string(seq[i]));
    std::vector<std::size_t> z;
    for (std::size_t j = 0; j < o.n_zeroth; ++j) {
      if (coin(rng)) z.push_back(j);
    }
    s.feat0.push_back(z);
    const std::size_t f = first_pick(rng);
    s.feat1.push_back(f < o.n_first ? std::vector<std::size_t>{f} : std::vector<std::size_t>{});
  }
  return s;
}

inline feathom::InfluenceVector random_influence(std::mt19937_64& rng, const feathom::FeatureSet& schema,
                                                 double hi = 5.0) {
  std::uniform_real_distribution<double> u(0.0, hi);
  std::vector<double> g0(schema.zeroth().size() + 1), g1(schema.first().size() + 1);
  for (auto& v : g0) v = u(rng);
  for (auto& v : g1) v = u(rng);
  return feathom::InfluenceVector(g0, g1);
}

}  // namespace fixtures
