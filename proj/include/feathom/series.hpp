#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feathom/error.hpp"

namespace feathom {

/// Reserved names for the "no feature" states. They always occupy column 0
/// of the corresponding influence sub-vector and count matrix.
inline constexpr std::string_view kEmptyZeroth = "∅0";
inline constexpr std::string_view kEmptyFirst = "∅1";

/// Observations over a finite, opaque symbol alphabet. Row order is time order.
struct TimeSeries {
  std::vector<std::string> timestamps;
  std::vector<std::string> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const TimeSeries&) const = default;
};

/// Zeroth features annotate single observations (vertices), first features
/// annotate consecutive pairs (edges).
class FeatureSet {
 public:
  FeatureSet() = default;
  FeatureSet(std::vector<std::string> zeroth, std::vector<std::string> first);

  const std::vector<std::string>& zeroth() const { return zeroth_; }
  const std::vector<std::string>& first() const { return first_; }

  std::optional<std::size_t> find_zeroth(std::string_view name) const;
  std::optional<std::size_t> find_first(std::string_view name) const;

  bool operator==(const FeatureSet&) const = default;

 private:
  std::vector<std::string> zeroth_;
  std::vector<std::string> first_;
};

/// Non-negative influence per feature. Index 0 of each part is the empty
/// state; index j > 0 is feature j-1 of the schema.
class InfluenceVector {
 public:
  /// All-zero vector sized for `schema`.
  explicit InfluenceVector(const FeatureSet& schema);
  InfluenceVector(std::vector<double> g0, std::vector<double> g1);

  const std::vector<double>& g0() const { return g0_; }
  const std::vector<double>& g1() const { return g1_; }

  void set_g0(std::size_t column, double value);
  void set_g1(std::size_t column, double value);

  bool matches(const FeatureSet& schema) const;

  /// max over all coordinates of |a - b|; both vectors must have equal shape.
  static double sup_distance(const InfluenceVector& a, const InfluenceVector& b);

  bool operator==(const InfluenceVector&) const = default;

 private:
  std::vector<double> g0_;
  std::vector<double> g1_;
};

/// A time series annotated, per timestamp, with subsets of the zeroth and
/// first feature lists. Subsets hold sorted 0-based indices into the schema
/// lists; an empty subset is the empty state.
struct FeaturedSeries {
  FeatureSet schema;
  TimeSeries base;
  std::vector<std::vector<std::size_t>> feat0;
  std::vector<std::vector<std::size_t>> feat1;

  std::size_t size() const { return base.size(); }

  /// Throws FormatError/SchemaError if the invariants do not hold.
  void validate() const;

  bool operator==(const FeaturedSeries&) const = default;
};

/// Parses `t,value,f0,f1` CSV. Feature cells are `;`-separated names.
FeaturedSeries parse_featured_series(std::istream& in, const FeatureSet& schema);
FeaturedSeries parse_featured_series(std::string_view text, const FeatureSet& schema);

/// Inverse of parse_featured_series.
std::string serialize_featured_series(const FeaturedSeries& series);

/// Reads `features0` / `features1` from a JSON document.
FeatureSet feature_set_from_json(std::string_view json_text);

/// Reads `g0` / `g1` maps from a JSON document; unlisted features are 0.
InfluenceVector influence_vector_from_json(std::string_view json_text,
                                           const FeatureSet& schema);

/// Contiguous rows [start, start + width).
FeaturedSeries slice_window(const FeaturedSeries& series, std::size_t start,
                            std::size_t width);

}  // namespace feathom
