#include "tweetorigin/gazetteer.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tweetorigin/text.hpp"

namespace tweetorigin {

namespace {

constexpr char kSnapshotMagic[4] = {'G', 'Z', 'I', 'X'};
constexpr std::uint32_t kSnapshotVersion = 1;

const char* const kKindNames[] = {"district", "city", "county", "state",
                                  "country",  "street", "poi"};

bool is_two_upper(const std::string& s) {
  return s.size() == 2 && s[0] >= 'A' && s[0] <= 'Z' && s[1] >= 'A' && s[1] <= 'Z';
}

}  // namespace

std::string_view to_string(PlaceKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<PlaceKind> parse_place_kind(std::string_view s) {
  for (int i = 0; i < 7; ++i) {
    if (s == kKindNames[i]) return static_cast<PlaceKind>(i);
  }
  return std::nullopt;
}

std::optional<std::string> validate_entry(const GazetteerEntry& e) {
  if (e.lon < -180.0 || e.lon > 180.0) return "lon out of range";
  if (e.lat < -90.0 || e.lat > 90.0) return "lat out of range";
  if (!is_two_upper(e.countrycode)) return "countrycode is not two uppercase letters";
  if (trim(e.name).empty()) return "name is blank";
  if (e.kind == PlaceKind::state &&
      (!e.district.empty() || !e.city.empty() || !e.county.empty())) {
    return "state entry carries finer administrative fields";
  }
  if (e.kind == PlaceKind::country && (!e.district.empty() || !e.city.empty() ||
                                       !e.county.empty() || !e.state.empty())) {
    return "country entry carries finer administrative fields";
  }
  return std::nullopt;
}

nlohmann::ordered_json feature_to_json(const GeoFeature& f) {
  nlohmann::ordered_json props;
  props["country"] = f.country;
  props["city"] = f.city;
  props["countrycode"] = f.countrycode;
  props["postcode"] = f.postcode;
  props["type"] = f.type;
  props["street"] = f.street;
  props["district"] = f.district;
  props["name"] = f.name;
  props["state"] = f.state;
  nlohmann::ordered_json j;
  j["coordinates"] = {f.lon, f.lat};
  j["properties"] = std::move(props);
  return j;
}

GazetteerEntry entry_from_json_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad json: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("record is not an object");

  static const std::unordered_set<std::string> kKeys = {
      "id",   "name",   "alt_names", "lon",   "lat",     "kind",       "street",
      "district", "city", "county",  "state", "country", "countrycode", "postcode"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw std::runtime_error("unknown key: " + key);
  }

  const auto get_str = [&](const char* key, bool required) -> std::string {
    if (!j.contains(key) || j[key].is_null()) {
      if (required) throw std::runtime_error(std::string("missing key: ") + key);
      return "";
    }
    if (!j[key].is_string()) throw std::runtime_error(std::string(key) + " is not a string");
    return j[key].get<std::string>();
  };
  const auto get_num = [&](const char* key) -> double {
    if (!j.contains(key) || !j[key].is_number()) {
      throw std::runtime_error(std::string(key) + " is not a number");
    }
    return j[key].get<double>();
  };

  GazetteerEntry e;
  e.id = get_str("id", true);
  if (e.id.empty()) throw std::runtime_error("id is empty");
  e.name = get_str("name", true);
  e.lon = get_num("lon");
  e.lat = get_num("lat");
  const std::string kind = get_str("kind", true);
  const auto parsed = parse_place_kind(kind);
  if (!parsed) throw std::runtime_error("unknown kind: " + kind);
  e.kind = *parsed;
  if (j.contains("alt_names") && !j["alt_names"].is_null()) {
    if (!j["alt_names"].is_array()) throw std::runtime_error("alt_names is not an array");
    for (const auto& a : j["alt_names"]) {
      if (!a.is_string()) throw std::runtime_error("alt_names entry is not a string");
      e.alt_names.push_back(a.get<std::string>());
    }
  }
  e.street = get_str("street", false);
  e.district = get_str("district", false);
  e.city = get_str("city", false);
  e.county = get_str("county", false);
  e.state = get_str("state", false);
  e.country = get_str("country", false);
  e.countrycode = get_str("countrycode", true);
  e.postcode = get_str("postcode", false);

  if (auto reason = validate_entry(e)) throw std::runtime_error(*reason);
  return e;
}

std::vector<GazetteerEntry> load_gazetteer(const std::string& path, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gazetteer file: " + path);
  std::vector<GazetteerEntry> entries;
  LoadReport local;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      entries.push_back(entry_from_json_line(line));
      ++local.loaded;
    } catch (const std::exception& e) {
      ++local.skipped;
      local.diagnostics.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (report) *report = std::move(local);
  return entries;
}

GeoIndex build_index(std::vector<GazetteerEntry> entries) {
  GeoIndex index;
  index.entries_ = std::move(entries);
  const std::size_t n = index.entries_.size();

  {
    std::unordered_set<std::string> seen;
    seen.reserve(n);
    for (const auto& e : index.entries_) {
      if (!seen.insert(e.id).second) {
        throw std::invalid_argument("duplicate gazetteer id: " + e.id);
      }
    }
  }

  // rank entries by id so distance ties resolve to the smaller id
  std::vector<std::uint32_t> by_id(n);
  std::iota(by_id.begin(), by_id.end(), 0u);
  std::sort(by_id.begin(), by_id.end(), [&](std::uint32_t a, std::uint32_t b) {
    return index.entries_[a].id < index.entries_[b].id;
  });
  index.id_rank_.resize(n);
  for (std::uint32_t r = 0; r < n; ++r) index.id_rank_[by_id[r]] = r;

  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& e = index.entries_[i];
    std::unordered_set<std::string> entry_tokens;
    const auto add_phrase = [&](const std::string& raw) {
      const auto tokens = tokenize(raw);
      if (tokens.empty()) return;
      std::string phrase;
      for (const auto& t : tokens) {
        if (!phrase.empty()) phrase.push_back(' ');
        phrase += t.norm;
        entry_tokens.insert(t.norm);
      }
      index.phrases_.insert(phrase);
      index.max_phrase_tokens_ = std::max(index.max_phrase_tokens_, tokens.size());
    };
    add_phrase(e.name);
    for (const auto& alt : e.alt_names) add_phrase(alt);
    for (const auto& tok : entry_tokens) index.token_index_[tok].push_back(i);
  }

  std::vector<Vec3> points(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    points[i] = unit_vector(index.entries_[i].lon, index.entries_[i].lat);
  }
  index.spatial_ = KdTree::build(std::move(points), index.id_rank_);
  return index;
}

GeoFeature GeoIndex::feature_at(std::uint32_t i) const {
  const GazetteerEntry& e = entries_[i];
  GeoFeature f;
  f.lon = e.lon;
  f.lat = e.lat;
  f.country = e.country;
  f.city = e.city;
  f.countrycode = e.countrycode;
  f.postcode = e.postcode;
  f.type = std::string(to_string(e.kind));
  f.street = e.street;
  f.district = e.district;
  f.name = e.name;
  f.state = e.state;
  f.county = e.county;
  return f;
}

std::vector<GeoFeature> GeoIndex::forward(const std::string& query, std::size_t limit) const {
  std::vector<GeoFeature> out;
  if (limit == 0) return out;
  const auto query_tokens = tokenize(query);
  if (query_tokens.empty()) return out;

  std::unordered_set<std::uint32_t> candidate_set;
  for (const auto& t : query_tokens) {
    const auto it = token_index_.find(t.norm);
    if (it == token_index_.end()) continue;
    for (std::uint32_t i : it->second) candidate_set.insert(i);
  }
  if (candidate_set.empty()) return out;

  struct Scored {
    std::uint32_t index;
    int score;
  };
  std::vector<Scored> scored;
  scored.reserve(candidate_set.size());
  for (std::uint32_t i : candidate_set) {
    const auto& e = entries_[i];
    std::unordered_set<std::string> name_tokens;
    for (const auto& t : tokenize(e.name)) name_tokens.insert(t.norm);
    std::unordered_set<std::string> alt_tokens;
    for (const auto& alt : e.alt_names) {
      for (const auto& t : tokenize(alt)) alt_tokens.insert(t.norm);
    }
    int score = 0;
    for (const auto& t : query_tokens) {
      if (name_tokens.count(t.norm)) {
        score += 2;
      } else if (alt_tokens.count(t.norm)) {
        score += 1;
      }
    }
    if (score > 0) scored.push_back({i, score});
  }
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    const auto& ea = entries_[a.index];
    const auto& eb = entries_[b.index];
    if (ea.name.size() != eb.name.size()) return ea.name.size() < eb.name.size();
    return ea.id < eb.id;
  });
  const std::size_t take = std::min(limit, scored.size());
  out.reserve(take);
  for (std::size_t k = 0; k < take; ++k) out.push_back(feature_at(scored[k].index));
  return out;
}

GeoFeature GeoIndex::reverse(double lon, double lat) const {
  if (entries_.empty()) throw NoCoverageError("no coverage: index is empty");
  const std::uint32_t i = spatial_.nearest(unit_vector(lon, lat));
  return feature_at(i);
}

bool GeoIndex::has_phrase(const std::string& normalized_phrase) const {
  return phrases_.count(normalized_phrase) > 0;
}

namespace {

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_str(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("snapshot truncated");
  return v;
}
std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("snapshot truncated");
  return v;
}
double read_f64(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("snapshot truncated");
  return v;
}
std::string read_str(std::istream& in) {
  const std::uint32_t len = read_u32(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw std::runtime_error("snapshot truncated");
  return s;
}

}  // namespace

void GeoIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write snapshot: " + path);
  out.write(kSnapshotMagic, 4);
  write_u32(out, kSnapshotVersion);
  write_u64(out, entries_.size());
  for (const auto& e : entries_) {
    write_str(out, e.id);
    write_str(out, e.name);
    write_u32(out, static_cast<std::uint32_t>(e.alt_names.size()));
    for (const auto& a : e.alt_names) write_str(out, a);
    write_f64(out, e.lon);
    write_f64(out, e.lat);
    write_u32(out, static_cast<std::uint32_t>(e.kind));
    write_str(out, e.street);
    write_str(out, e.district);
    write_str(out, e.city);
    write_str(out, e.county);
    write_str(out, e.state);
    write_str(out, e.country);
    write_str(out, e.countrycode);
    write_str(out, e.postcode);
  }
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

GeoIndex GeoIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kSnapshotMagic, 4) != 0) {
    throw std::runtime_error("not an index snapshot: " + path);
  }
  const std::uint32_t version = read_u32(in);
  if (version != kSnapshotVersion) {
    throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  }
  const std::uint64_t count = read_u64(in);
  std::vector<GazetteerEntry> entries;
  entries.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    GazetteerEntry e;
    e.id = read_str(in);
    e.name = read_str(in);
    const std::uint32_t n_alt = read_u32(in);
    e.alt_names.reserve(n_alt);
    for (std::uint32_t a = 0; a < n_alt; ++a) e.alt_names.push_back(read_str(in));
    e.lon = read_f64(in);
    e.lat = read_f64(in);
    const std::uint32_t kind = read_u32(in);
    if (kind > static_cast<std::uint32_t>(PlaceKind::poi)) {
      throw std::runtime_error("snapshot has unknown place kind");
    }
    e.kind = static_cast<PlaceKind>(kind);
    e.street = read_str(in);
    e.district = read_str(in);
    e.city = read_str(in);
    e.county = read_str(in);
    e.state = read_str(in);
    e.country = read_str(in);
    e.countrycode = read_str(in);
    e.postcode = read_str(in);
    entries.push_back(std::move(e));
  }
  return build_index(std::move(entries));
}

void save_index(const GeoIndex& index, const std::string& path) { index.save(path); }

GeoIndex load_index(const std::string& path) { return GeoIndex::load(path); }

}  // namespace tweetorigin
