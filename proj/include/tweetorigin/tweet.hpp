#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tweetorigin {

/// Ingested corpus record. Only `id` and a nonempty `text` are required; the
/// remaining attributes feed the distribution reports.
struct Tweet {
  std::string id;
  std::string text;
  std::optional<std::pair<double, double>> coordinates;  // (lon, lat)
  std::optional<std::string> source;
  std::optional<bool> possibly_sensitive;
  std::optional<bool> has_media;
  std::optional<bool> user_verified;
  std::optional<std::uint64_t> user_followers;
  std::optional<std::uint64_t> user_friends;
  std::optional<int> user_created_year;
};

// Parses one JSON-lines corpus record; throws std::runtime_error on
// malformed input (missing/empty text, out-of-range coordinates, bad types).
Tweet tweet_from_json_line(const std::string& line);

// Reads a whole JSON-lines corpus; malformed lines throw.
std::vector<Tweet> read_corpus(const std::string& path);

}  // namespace tweetorigin
