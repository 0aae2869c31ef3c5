#include "tweetorigin/tweet.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tweetorigin/text.hpp"

namespace tweetorigin {

Tweet tweet_from_json_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad json: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("record is not an object");

  Tweet t;
  if (!j.contains("id") || j["id"].is_null()) throw std::runtime_error("missing id");
  if (j["id"].is_string()) {
    t.id = j["id"].get<std::string>();
  } else if (j["id"].is_number_integer()) {
    t.id = std::to_string(j["id"].get<std::int64_t>());
  } else {
    throw std::runtime_error("id is neither string nor integer");
  }
  if (!j.contains("text") || !j["text"].is_string()) throw std::runtime_error("missing text");
  t.text = j["text"].get<std::string>();
  if (trim(t.text).empty()) throw std::runtime_error("text is empty");

  if (j.contains("coordinates") && !j["coordinates"].is_null()) {
    const auto& c = j["coordinates"];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      throw std::runtime_error("coordinates is not [lon, lat]");
    }
    const double lon = c[0].get<double>();
    const double lat = c[1].get<double>();
    if (lon < -180.0 || lon > 180.0 || lat < -90.0 || lat > 90.0) {
      throw std::runtime_error("coordinates out of range");
    }
    t.coordinates = {lon, lat};
  }

  const auto opt_str = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_string()) throw std::runtime_error(std::string(key) + " is not a string");
    return j[key].get<std::string>();
  };
  const auto opt_bool = [&](const char* key) -> std::optional<bool> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_boolean()) throw std::runtime_error(std::string(key) + " is not a boolean");
    return j[key].get<bool>();
  };
  const auto opt_count = [&](const char* key) -> std::optional<std::uint64_t> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_number_unsigned() && !j[key].is_number_integer()) {
      throw std::runtime_error(std::string(key) + " is not a count");
    }
    const std::int64_t v = j[key].get<std::int64_t>();
    if (v < 0) throw std::runtime_error(std::string(key) + " is negative");
    return static_cast<std::uint64_t>(v);
  };

  t.source = opt_str("source");
  t.possibly_sensitive = opt_bool("possibly_sensitive");
  t.has_media = opt_bool("has_media");
  t.user_verified = opt_bool("user_verified");
  t.user_followers = opt_count("user_followers");
  t.user_friends = opt_count("user_friends");
  if (j.contains("user_created_year") && !j["user_created_year"].is_null()) {
    if (!j["user_created_year"].is_number_integer()) {
      throw std::runtime_error("user_created_year is not an integer");
    }
    t.user_created_year = j["user_created_year"].get<int>();
  }
  return t;
}

std::vector<Tweet> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  std::vector<Tweet> tweets;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      tweets.push_back(tweet_from_json_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return tweets;
}

}  // namespace tweetorigin
