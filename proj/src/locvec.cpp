#include "tweetorigin/locvec.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tweetorigin/text.hpp"

namespace tweetorigin {

const std::optional<std::string>& LocationVector::component(std::size_t i) const {
  switch (i) {
    case 0: return district;
    case 1: return county;
    case 2: return city;
    case 3: return state;
    case 4: return country;
    default: throw std::out_of_range("location vector component");
  }
}

std::optional<std::string>& LocationVector::component(std::size_t i) {
  return const_cast<std::optional<std::string>&>(
      static_cast<const LocationVector&>(*this).component(i));
}

bool LocationVector::all_null() const {
  return !district && !county && !city && !state && !country;
}

LocationVector vector_from_feature(const GeoFeature& f) {
  const auto slot = [](const std::string& s) -> std::optional<std::string> {
    if (s.empty()) return std::nullopt;
    return s;
  };
  LocationVector v;
  v.district = slot(f.district);
  v.county = slot(f.county);
  v.city = slot(f.city);
  v.state = slot(f.state);
  v.country = slot(f.country);
  return v;
}

std::optional<std::string> vote(const std::vector<std::optional<std::string>>& values) {
  struct Tally {
    std::size_t count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Tally> tallies;
  for (std::size_t pos = 0; pos < values.size(); ++pos) {
    const auto& v = values[pos];
    if (!v) continue;
    auto [it, inserted] = tallies.try_emplace(*v);
    if (inserted) it->second.first_seen = pos;
    ++it->second.count;
  }
  std::optional<std::string> winner;
  std::size_t best_count = 0;
  std::size_t best_first = 0;
  for (const auto& [value, tally] : tallies) {
    // max count; ties go to the value first seen earliest
    if (tally.count > best_count ||
        (tally.count == best_count && tally.first_seen < best_first)) {
      best_count = tally.count;
      best_first = tally.first_seen;
      winner = value;
    }
  }
  return winner;
}

LocationVector conclusive_vector(const std::vector<LocationVector>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("no location vectors");
  LocationVector out;
  for (std::size_t slot = 0; slot < LocationVector::kComponents; ++slot) {
    std::vector<std::optional<std::string>> column;
    column.reserve(vectors.size());
    for (const auto& v : vectors) column.push_back(v.component(slot));
    out.component(slot) = vote(column);
  }
  return out;
}

void CountryDict::insert(std::string code, std::string name) {
  const std::string code_key = lower_ascii(code);
  const std::string name_key = lower_ascii(name);
  if (code_key.size() != 2) throw std::runtime_error("country code is not two letters: " + code);
  if (!by_code_.emplace(code_key, name).second) {
    throw std::runtime_error("duplicate country code: " + code);
  }
  if (!by_name_.emplace(name_key, code).second) {
    throw std::runtime_error("duplicate country name: " + name);
  }
  rows_.emplace_back(std::move(code), std::move(name));
}

CountryDict CountryDict::parse_csv(std::string_view text, const std::string& origin) {
  CountryDict dict;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(origin + " line " + std::to_string(lineno) + ": expected code,name");
    }
    const std::string code = trim(t.substr(0, comma));
    const std::string name = trim(t.substr(comma + 1));
    if (code.empty() || name.empty()) {
      throw std::runtime_error(origin + " line " + std::to_string(lineno) + ": blank code or name");
    }
    dict.insert(code, name);
  }
  return dict;
}

CountryDict CountryDict::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open country table: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

CountryDict::Normalized CountryDict::normalize(std::string_view value) const {
  const std::string key = lower_ascii(trim(value));
  if (const auto it = by_code_.find(key); it != by_code_.end()) {
    return {it->second, true};
  }
  if (const auto it = by_name_.find(key); it != by_name_.end()) {
    // canonical casing of the name
    return {by_code_.at(lower_ascii(it->second)), true};
  }
  return {std::string(value), false};
}

std::optional<std::string> CountryDict::name_for(std::string_view code) const {
  const auto it = by_code_.find(lower_ascii(trim(code)));
  if (it == by_code_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> CountryDict::code_for(std::string_view name) const {
  const auto it = by_name_.find(lower_ascii(trim(name)));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

LocationVector normalize_vector(const LocationVector& v, const CountryDict& dict) {
  const auto norm = [](const std::optional<std::string>& s) -> std::optional<std::string> {
    if (!s) return std::nullopt;
    const std::string t = trim(*s);
    if (t.empty()) return std::nullopt;
    return lower_ascii(t);
  };
  LocationVector out;
  out.district = norm(v.district);
  out.county = norm(v.county);
  out.city = norm(v.city);
  out.state = norm(v.state);
  if (v.country) {
    const std::string t = trim(*v.country);
    if (!t.empty()) out.country = lower_ascii(dict.normalize(t).value);
  }
  return out;
}

}  // namespace tweetorigin
