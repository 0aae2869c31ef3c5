#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tweetorigin/gazetteer.hpp"

namespace tweetorigin {

/// The five-level location value: [district, county, city, state, country].
/// Unset slots are places the source did not resolve at that granularity.
struct LocationVector {
  static constexpr std::size_t kComponents = 5;

  std::optional<std::string> district;
  std::optional<std::string> county;
  std::optional<std::string> city;
  std::optional<std::string> state;
  std::optional<std::string> country;

  const std::optional<std::string>& component(std::size_t i) const;
  std::optional<std::string>& component(std::size_t i);
  bool all_null() const;

  bool operator==(const LocationVector&) const = default;
};

inline constexpr std::array<std::string_view, LocationVector::kComponents> kComponentNames{
    "district", "county", "city", "state", "country"};

// Copies the administrative slots out of a geocode result; empty strings map
// to unset.
LocationVector vector_from_feature(const GeoFeature& f);

// Most frequent non-null value; ties go to the value whose first occurrence
// comes earliest. Null only when every input is null (or the list is empty).
std::optional<std::string> vote(const std::vector<std::optional<std::string>>& values);

// Slot-wise vote across vectors. Throws std::invalid_argument when `vectors`
// is empty.
LocationVector conclusive_vector(const std::vector<LocationVector>& vectors);

/// Bijective ISO-3166 alpha-2 code <-> canonical country name table.
/// Lookups are case-insensitive; stored casing is canonical.
class CountryDict {
 public:
  struct Normalized {
    std::string value;
    bool known = false;
  };

  // Built-in ISO-3166 table.
  static const CountryDict& builtin();

  // Two-column CSV: code,name. '#' comments and blank lines are skipped.
  // Throws on duplicate codes or duplicate names.
  static CountryDict load_csv(const std::string& path);
  static CountryDict parse_csv(std::string_view text, const std::string& origin);

  // Code -> canonical name; canonical name -> itself; anything else is
  // returned unchanged with known=false.
  Normalized normalize(std::string_view value) const;

  std::optional<std::string> name_for(std::string_view code) const;
  std::optional<std::string> code_for(std::string_view name) const;
  std::size_t size() const { return rows_.size(); }

 private:
  void insert(std::string code, std::string name);

  std::unordered_map<std::string, std::string> by_code_;  // lowercased code -> canonical name
  std::unordered_map<std::string, std::string> by_name_;  // lowercased name -> canonical code
  std::vector<std::pair<std::string, std::string>> rows_;
};

inline CountryDict::Normalized normalize_country(const std::string& value,
                                                 const CountryDict& dict) {
  return dict.normalize(value);
}

// Component normalization applied ahead of voting and ground-truth
// comparison: trim, case-fold, and country normalization on the country slot.
// Slots that trim to nothing become unset.
LocationVector normalize_vector(const LocationVector& v, const CountryDict& dict);

}  // namespace tweetorigin
