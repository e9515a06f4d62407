#include "feathom/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "text_util.hpp"

namespace feathom {

namespace {

void check_names(const std::vector<std::string>& names, const char* which) {
  std::unordered_set<std::string> seen;
  for (const auto& name : names) {
    if (name.empty()) {
      throw SchemaError(std::string("empty feature name in ") + which);
    }
    if (name == kEmptyZeroth || name == kEmptyFirst) {
      throw SchemaError("reserved name " + name + " used as a feature in " + which);
    }
    if (name.find(';') != std::string::npos || name.find(',') != std::string::npos) {
      throw SchemaError("feature name '" + name + "' contains a delimiter");
    }
    if (!seen.insert(name).second) {
      throw SchemaError("duplicate feature " + name + " in " + which);
    }
  }
}

std::optional<std::size_t> index_of(const std::vector<std::string>& names,
                                    std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

// A value cell is rejected when blank or when it reads as a negative number.
bool is_negative_number(std::string_view cell) {
  if (cell.empty() || cell.front() != '-') return false;
  double parsed = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), parsed);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::vector<std::size_t> parse_feature_cell(std::string_view cell,
                                            const std::vector<std::string>& names,
                                            std::size_t row) {
  std::vector<std::size_t> out;
  if (detail::trim(cell).empty()) return out;
  for (auto token : detail::split(cell, ';')) {
    token = detail::trim(token);
    if (token.empty()) continue;
    auto idx = index_of(names, token);
    if (!idx) {
      throw SchemaError("unknown feature " + std::string(token) + " at row " +
                        std::to_string(row));
    }
    out.push_back(*idx);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string join_features(const std::vector<std::size_t>& subset,
                          const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) out += ';';
    out += names[subset[i]];
  }
  return out;
}

void read_influences(const nlohmann::json& section, const std::vector<std::string>& names,
                     std::string_view empty_name, const char* key,
                     std::vector<double>& target) {
  if (!section.is_object()) {
    throw SchemaError(std::string(key) + " must be an object of feature -> influence");
  }
  for (const auto& [name, value] : section.items()) {
    if (!value.is_number()) {
      throw SchemaError(std::string(key) + "." + name + " is not a number");
    }
    const double influence = value.get<double>();
    if (!(influence >= 0.0) || !std::isfinite(influence)) {
      throw DomainError("negative influence " + name + " = " + std::to_string(influence));
    }
    if (name == empty_name) {
      target[0] = influence;
      continue;
    }
    auto idx = index_of(names, name);
    if (!idx) throw SchemaError("unknown feature " + name + " in " + key);
    target[*idx + 1] = influence;
  }
}

}  // namespace

FeatureSet::FeatureSet(std::vector<std::string> zeroth, std::vector<std::string> first)
    : zeroth_(std::move(zeroth)), first_(std::move(first)) {
  check_names(zeroth_, "features0");
  check_names(first_, "features1");
}

std::optional<std::size_t> FeatureSet::find_zeroth(std::string_view name) const {
  return index_of(zeroth_, name);
}

std::optional<std::size_t> FeatureSet::find_first(std::string_view name) const {
  return index_of(first_, name);
}

InfluenceVector::InfluenceVector(const FeatureSet& schema)
    : g0_(schema.zeroth().size() + 1, 0.0), g1_(schema.first().size() + 1, 0.0) {}

InfluenceVector::InfluenceVector(std::vector<double> g0, std::vector<double> g1)
    : g0_(std::move(g0)), g1_(std::move(g1)) {
  if (g0_.empty() || g1_.empty()) {
    throw SchemaError("influence vector needs an empty-state entry in g0 and g1");
  }
  for (double v : g0_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("negative influence in g0");
  }
  for (double v : g1_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("negative influence in g1");
  }
}

void InfluenceVector::set_g0(std::size_t column, double value) {
  if (column >= g0_.size()) throw BoundsError("g0 column out of range");
  if (!(value >= 0.0) || !std::isfinite(value)) throw DomainError("negative influence in g0");
  g0_[column] = value;
}

void InfluenceVector::set_g1(std::size_t column, double value) {
  if (column >= g1_.size()) throw BoundsError("g1 column out of range");
  if (!(value >= 0.0) || !std::isfinite(value)) throw DomainError("negative influence in g1");
  g1_[column] = value;
}

bool InfluenceVector::matches(const FeatureSet& schema) const {
  return g0_.size() == schema.zeroth().size() + 1 && g1_.size() == schema.first().size() + 1;
}

double InfluenceVector::sup_distance(const InfluenceVector& a, const InfluenceVector& b) {
  if (a.g0_.size() != b.g0_.size() || a.g1_.size() != b.g1_.size()) {
    throw SchemaError("influence vectors have different shapes");
  }
  double out = 0.0;
  for (std::size_t i = 0; i < a.g0_.size(); ++i) out = std::max(out, std::abs(a.g0_[i] - b.g0_[i]));
  for (std::size_t i = 0; i < a.g1_.size(); ++i) out = std::max(out, std::abs(a.g1_[i] - b.g1_[i]));
  return out;
}

void FeaturedSeries::validate() const {
  const std::size_t n = base.values.size();
  if (base.timestamps.size() != n || feat0.size() != n || feat1.size() != n) {
    throw FormatError("featured series columns have different lengths");
  }
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen.insert(base.timestamps[i]).second) {
      throw FormatError("duplicate timestamp " + base.timestamps[i] + " at row " +
                        std::to_string(i + 1));
    }
    if (base.values[i].empty()) {
      throw FormatError("blank value at row " + std::to_string(i + 1));
    }
    for (auto j : feat0[i]) {
      if (j >= schema.zeroth().size()) throw SchemaError("feature index out of range in f0");
    }
    for (auto j : feat1[i]) {
      if (j >= schema.first().size()) throw SchemaError("feature index out of range in f1");
    }
  }
}

FeaturedSeries parse_featured_series(std::istream& in, const FeatureSet& schema) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty input, expected header t,value,f0,f1");
  detail::strip_cr(line);
  if (detail::trim(detail::strip_bom(line)) != "t,value,f0,f1") {
    throw FormatError("expected header t,value,f0,f1, got '" + line + "'");
  }

  FeaturedSeries series;
  series.schema = schema;
  std::unordered_set<std::string> seen;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    detail::strip_cr(line);
    if (detail::trim(line).empty()) continue;
    ++row;
    auto cells = detail::split(line, ',');
    if (cells.size() < 2 || cells.size() > 4) {
      throw FormatError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " cells, expected 4");
    }
    cells.resize(4);
    const std::string timestamp(detail::trim(cells[0]));
    const std::string value(detail::trim(cells[1]));
    if (timestamp.empty()) throw FormatError("blank timestamp at row " + std::to_string(row));
    if (!seen.insert(timestamp).second) {
      throw FormatError("duplicate timestamp " + timestamp + " at row " + std::to_string(row));
    }
    if (value.empty()) throw FormatError("blank value at row " + std::to_string(row));
    if (is_negative_number(value)) {
      throw FormatError("negative value " + value + " at row " + std::to_string(row));
    }
    series.base.timestamps.push_back(timestamp);
    series.base.values.push_back(value);
    series.feat0.push_back(parse_feature_cell(cells[2], schema.zeroth(), row));
    series.feat1.push_back(parse_feature_cell(cells[3], schema.first(), row));
  }
  return series;
}

FeaturedSeries parse_featured_series(std::string_view text, const FeatureSet& schema) {
  std::istringstream in{std::string(text)};
  return parse_featured_series(in, schema);
}

std::string serialize_featured_series(const FeaturedSeries& series) {
  std::string out = "t,value,f0,f1\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += series.base.timestamps[i];
    out += ',';
    out += series.base.values[i];
    out += ',';
    out += join_features(series.feat0[i], series.schema.zeroth());
    out += ',';
    out += join_features(series.feat1[i], series.schema.first());
    out += '\n';
  }
  return out;
}

FeatureSet feature_set_from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("config must be a JSON object");
  auto names = [&](const char* key) {
    std::vector<std::string> out;
    if (!doc.contains(key)) return out;
    const auto& list = doc.at(key);
    if (!list.is_array()) throw SchemaError(std::string(key) + " must be an array of names");
    for (const auto& item : list) {
      if (item.is_string()) {
        out.push_back(item.get<std::string>());
      } else if (item.is_number()) {
        out.push_back(item.dump());
      } else {
        throw SchemaError(std::string(key) + " entries must be strings");
      }
    }
    return out;
  };
  return FeatureSet(names("features0"), names("features1"));
}

InfluenceVector influence_vector_from_json(std::string_view json_text,
                                           const FeatureSet& schema) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("config must be a JSON object");
  static const std::set<std::string> known = {"features0", "features1", "g0", "g1"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw SchemaError("unknown config key " + key);
  }
  std::vector<double> g0(schema.zeroth().size() + 1, 0.0);
  std::vector<double> g1(schema.first().size() + 1, 0.0);
  if (doc.contains("g0")) read_influences(doc["g0"], schema.zeroth(), kEmptyZeroth, "g0", g0);
  if (doc.contains("g1")) read_influences(doc["g1"], schema.first(), kEmptyFirst, "g1", g1);
  return InfluenceVector(std::move(g0), std::move(g1));
}

FeaturedSeries slice_window(const FeaturedSeries& series, std::size_t start,
                            std::size_t width) {
  if (width < 2) throw BoundsError("window length must be at least 2");
  if (start > series.size() || width > series.size() - start) {
    throw BoundsError("window [" + std::to_string(start) + ", " + std::to_string(start + width) +
                      ") exceeds series length " + std::to_string(series.size()));
  }
  FeaturedSeries out;
  out.schema = series.schema;
  const auto first = static_cast<std::ptrdiff_t>(start);
  const auto last = static_cast<std::ptrdiff_t>(start + width);
  out.base.timestamps.assign(series.base.timestamps.begin() + first,
                             series.base.timestamps.begin() + last);
  out.base.values.assign(series.base.values.begin() + first, series.base.values.begin() + last);
  out.feat0.assign(series.feat0.begin() + first, series.feat0.begin() + last);
  out.feat1.assign(series.feat1.begin() + first, series.feat1.begin() + last);
  return out;
}

}  // namespace feathom
