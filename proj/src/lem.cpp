#include "tweetorigin/lem.hpp"

#include <algorithm>
#include <semaphore>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "tweetorigin/text.hpp"

namespace tweetorigin {

std::vector<ExtractedLocation> BaselineExtractor::extract(const std::string& text) {
  std::vector<ExtractedLocation> out;
  const auto tokens = tokenize(text);
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    const std::size_t longest = std::min(max_tokens_, tokens.size() - i);
    for (std::size_t len = longest; len >= 1; --len) {
      std::string phrase;
      for (std::size_t k = i; k < i + len; ++k) {
        if (!phrase.empty()) phrase.push_back(' ');
        phrase += tokens[k].norm;
      }
      if (index_->has_phrase(phrase)) {
        matched = len;
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    ExtractedLocation loc;
    loc.begin = tokens[i].begin;
    loc.end = tokens[i + matched - 1].end;
    loc.surface = text.substr(loc.begin, loc.end - loc.begin);
    out.push_back(std::move(loc));
    i += matched;
  }
  return out;
}

namespace {
struct InflightGate {
  explicit InflightGate(std::ptrdiff_t n) : sem(n) {}
  std::counting_semaphore<64> sem;
};
}  // namespace

RemoteExtractor::RemoteExtractor(Options opts) : opts_(std::move(opts)) {
  std::size_t n = opts_.max_inflight == 0 ? 64 : opts_.max_inflight;
  n = std::min<std::size_t>(64, std::max<std::size_t>(1, n));
  inflight_gate_ = std::make_shared<InflightGate>(static_cast<std::ptrdiff_t>(n));
}

std::vector<ExtractedLocation> RemoteExtractor::extract(const std::string& text) {
  auto* gate = static_cast<InflightGate*>(inflight_gate_.get());
  gate->sem.acquire();
  struct Release {
    InflightGate* g;
    ~Release() { g->sem.release(); }
  } release{gate};

  httplib::Client client(opts_.base_url);
  client.set_connection_timeout(0, opts_.timeout_ms * 1000);
  client.set_read_timeout(0, opts_.timeout_ms * 1000);

  nlohmann::json body;
  body["texts"] = {text};
  const auto res = client.Post("/extract", body.dump(), "application/json");
  if (!res) throw TransportError("extractor endpoint unreachable: " + opts_.base_url);
  if (res->status != 200) {
    throw TransportError("extractor endpoint returned status " + std::to_string(res->status));
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed extractor response: ") + e.what());
  }
  if (!j.contains("entities") || !j["entities"].is_array() || j["entities"].size() != 1 ||
      !j["entities"][0].is_array()) {
    throw TransportError("extractor response entities missing or wrong shape");
  }
  std::vector<ExtractedLocation> out;
  for (const auto& ent : j["entities"][0]) {
    if (!ent.is_object() || !ent.contains("start") || !ent.contains("end") ||
        !ent["start"].is_number_integer() || !ent["end"].is_number_integer()) {
      throw TransportError("extractor response entity malformed");
    }
    const std::int64_t start = ent["start"].get<std::int64_t>();
    const std::int64_t end = ent["end"].get<std::int64_t>();
    if (start < 0 || end <= start || static_cast<std::size_t>(end) > text.size()) {
      throw TransportError("extractor response span out of bounds");
    }
    ExtractedLocation loc;
    loc.begin = static_cast<std::size_t>(start);
    loc.end = static_cast<std::size_t>(end);
    loc.surface = text.substr(loc.begin, loc.end - loc.begin);
    out.push_back(std::move(loc));
  }
  return out;
}

bool check_location_validity(const GeoIndex& index, const std::string& surface) {
  return !index.forward(surface, 1).empty();
}

MentionFilter MentionFilter::defaults() {
  return MentionFilter{{"city", "earth", "europe", "asia", "americas", "africa", "world", "town",
                        "county", "district"}};
}

bool MentionFilter::keep(const std::string& surface) const {
  const std::string t = trim(surface);
  if (utf8_length(t) < 2) return false;
  if (all_digits(t)) return false;
  const std::string folded = lower_ascii(t);
  for (const auto& generic : generic_names) {
    if (folded == lower_ascii(generic)) return false;
  }
  return true;
}

std::vector<ExtractedLocation> filter_mentions(const std::vector<ExtractedLocation>& mentions,
                                               const MentionFilter& filter) {
  std::vector<ExtractedLocation> out;
  out.reserve(mentions.size());
  for (const auto& m : mentions) {
    if (filter.keep(m.surface)) out.push_back(m);
  }
  return out;
}

std::vector<LemReportRow> compare_lem_candidates(const GeoIndex& index,
                                                 const std::vector<LocationExtractor*>& extractors,
                                                 const std::vector<Tweet>& corpus) {
  std::vector<LemReportRow> rows;
  rows.reserve(extractors.size());
  for (LocationExtractor* extractor : extractors) {
    LemReportRow row;
    row.extractor = extractor->name();
    // tweets are processed one at a time, which satisfies plugins that
    // declare themselves serialized
    for (const Tweet& tweet : corpus) {
      std::vector<ExtractedLocation> mentions;
      try {
        mentions = extractor->extract(tweet.text);
      } catch (const std::exception& e) {
        ++row.failed_tweets;
        row.failure_messages.push_back(tweet.id + ": " + e.what());
        continue;
      }
      row.stats.idloc += mentions.size();
      if (!mentions.empty()) ++row.stats.tloc;
      std::size_t valid_here = 0;
      for (const auto& m : mentions) {
        if (check_location_validity(index, m.surface)) ++valid_here;
      }
      row.stats.vloc += valid_here;
      if (valid_here > 0) ++row.stats.tvloc;
    }
    row.stats.invalid_locations = row.stats.idloc - row.stats.vloc;
    row.stats.invalid_tweets = row.stats.tloc - row.stats.tvloc;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_lem_report(const std::vector<LemReportRow>& rows) {
  std::ostringstream out;
  out << "extractor        idloc   tloc    vloc    tvloc   invalid_loc  invalid_tw  failed\n";
  for (const auto& row : rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-16s %-7zu %-7zu %-7zu %-7zu %-12zu %-11zu %zu\n",
                  row.extractor.c_str(), row.stats.idloc, row.stats.tloc, row.stats.vloc,
                  row.stats.tvloc, row.stats.invalid_locations, row.stats.invalid_tweets,
                  row.failed_tweets);
    out << line;
  }
  return out.str();
}

}  // namespace tweetorigin
