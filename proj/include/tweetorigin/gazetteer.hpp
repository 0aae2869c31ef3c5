#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "tweetorigin/errors.hpp"
#include "tweetorigin/geo.hpp"

namespace tweetorigin {

enum class PlaceKind { district, city, county, state, country, street, poi };

std::string_view to_string(PlaceKind kind);
std::optional<PlaceKind> parse_place_kind(std::string_view s);

/// One named place: the unit of the geocoding index. Administrative fields
/// that do not apply are empty strings.
struct GazetteerEntry {
  std::string id;
  std::string name;
  std::vector<std::string> alt_names;
  double lon = 0.0;
  double lat = 0.0;
  PlaceKind kind = PlaceKind::poi;
  std::string street;
  std::string district;
  std::string city;
  std::string county;
  std::string state;
  std::string country;      // may be empty for places without a resolvable country
  std::string countrycode;  // two uppercase letters
  std::string postcode;
};

// Empty result means the entry is valid; otherwise the reason it is rejected.
// Checks: coordinate ranges, countrycode shape, non-blank name, and that
// coarse kinds (state, country) leave their finer administrative fields unset.
std::optional<std::string> validate_entry(const GazetteerEntry& e);

/// One geocode result. `county` is carried from the index entry for the
/// location-vector pipeline; it is not part of the nine wire properties.
struct GeoFeature {
  double lon = 0.0;
  double lat = 0.0;
  std::string country;
  std::string city;
  std::string countrycode;
  std::string postcode;
  std::string type;
  std::string street;
  std::string district;
  std::string name;
  std::string state;
  std::string county;
};

// Wire payload: {"coordinates":[lon,lat],"properties":{...}} with exactly the
// nine property keys in the documented order.
nlohmann::ordered_json feature_to_json(const GeoFeature& f);

struct LoadReport {
  std::size_t loaded = 0;
  std::size_t skipped = 0;
  std::vector<std::string> diagnostics;
};

// Parses one JSON-lines gazetteer record; throws std::runtime_error on
// malformed input (unknown keys, missing required keys, bad types).
GazetteerEntry entry_from_json_line(const std::string& line);

// Reads a JSON-lines gazetteer file. Invalid lines are skipped and reported
// through `report`; an unreadable file throws.
std::vector<GazetteerEntry> load_gazetteer(const std::string& path, LoadReport* report = nullptr);

/// Immutable forward/reverse geocoding engine. Safe to share across threads
/// once built; queries have no side effects.
class GeoIndex {
 public:
  GeoIndex() = default;

  const std::vector<GazetteerEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Ranked token match over entry names and alternate names. A query token
  /// scores 2 when it appears in the name, 1 when only in an alternate name;
  /// entries are ordered by score, then shorter name, then smaller id.
  std::vector<GeoFeature> forward(const std::string& query, std::size_t limit) const;

  /// Feature of the entry nearest by great-circle distance; exact ties go to
  /// the smaller id. Throws NoCoverageError on an empty index.
  GeoFeature reverse(double lon, double lat) const;

  // True when the normalized phrase equals some entry's full name or
  // alternate name; used by the n-gram baseline extractor.
  bool has_phrase(const std::string& normalized_phrase) const;

  // Longest name/alt name, in tokens, seen at build time.
  std::size_t max_phrase_tokens() const { return max_phrase_tokens_; }

  void save(const std::string& path) const;
  static GeoIndex load(const std::string& path);

  friend GeoIndex build_index(std::vector<GazetteerEntry> entries);

 private:
  GeoFeature feature_at(std::uint32_t i) const;

  std::vector<GazetteerEntry> entries_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> token_index_;
  std::unordered_set<std::string> phrases_;
  std::vector<std::uint32_t> id_rank_;  // entry position -> rank in id order
  KdTree spatial_;
  std::size_t max_phrase_tokens_ = 0;
};

// Builds the immutable index; throws std::invalid_argument on duplicate ids.
GeoIndex build_index(std::vector<GazetteerEntry> entries);

inline std::vector<GeoFeature> forward_geocode(const GeoIndex& index, const std::string& query,
                                               std::size_t limit) {
  return index.forward(query, limit);
}

inline GeoFeature reverse_geocode(const GeoIndex& index, double lon, double lat) {
  return index.reverse(lon, lat);
}

void save_index(const GeoIndex& index, const std::string& path);
GeoIndex load_index(const std::string& path);

}  // namespace tweetorigin
