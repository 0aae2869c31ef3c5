#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tweetorigin/errors.hpp"
#include "tweetorigin/gazetteer.hpp"
#include "tweetorigin/tweet.hpp"

namespace tweetorigin {

/// One location mention found in a tweet. `surface` always equals the text
/// slice at [begin,end); `valid` stays unset until checked against the index.
struct ExtractedLocation {
  std::string surface;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::optional<bool> valid;
};

/// The pluggable mention-extractor seam. Implementations must either be safe
/// for concurrent per-tweet calls or say so via concurrent_safe(); harnesses
/// honor the declaration.
class LocationExtractor {
 public:
  virtual ~LocationExtractor() = default;
  virtual std::string name() const = 0;
  virtual std::vector<ExtractedLocation> extract(const std::string& text) = 0;
  virtual bool concurrent_safe() const { return true; }
};

/// Gazetteer n-gram baseline: greedy maximal match of normalized token
/// windows (longest first, left to right) against the index's name and
/// alternate-name phrases. '#'/'@' prefixes are stripped by normalization, so
/// hashtag mentions match. Matches never overlap.
class BaselineExtractor final : public LocationExtractor {
 public:
  explicit BaselineExtractor(const GeoIndex& index, std::size_t max_tokens = 4)
      : index_(&index), max_tokens_(max_tokens == 0 ? 1 : max_tokens) {}

  std::string name() const override { return "baseline"; }
  std::vector<ExtractedLocation> extract(const std::string& text) override;

 private:
  const GeoIndex* index_;
  std::size_t max_tokens_;
};

/// Client for a remote NER server:
///   POST /extract {"texts": [...]} ->
///   {"entities": [[{"surface":..., "start":..., "end":...}, ...]]}
/// start/end are byte offsets into the UTF-8 text and are authoritative; the
/// surface is re-sliced from the text so the span invariant always holds.
class RemoteExtractor final : public LocationExtractor {
 public:
  struct Options {
    std::string base_url;
    int timeout_ms = 5000;
    std::size_t max_inflight = 4;
  };

  explicit RemoteExtractor(Options opts);

  std::string name() const override { return "remote"; }
  std::vector<ExtractedLocation> extract(const std::string& text) override;

 private:
  Options opts_;
  std::shared_ptr<void> inflight_gate_;
};

// True iff forward geocoding the surface returns at least one feature.
bool check_location_validity(const GeoIndex& index, const std::string& surface);

/// Drops mentions that are shorter than two characters, purely numeric, or a
/// generic region word. The generic list is configurable.
struct MentionFilter {
  std::vector<std::string> generic_names;  // compared case-insensitively

  static MentionFilter defaults();
  bool keep(const std::string& surface) const;
};

std::vector<ExtractedLocation> filter_mentions(const std::vector<ExtractedLocation>& mentions,
                                               const MentionFilter& filter = MentionFilter::defaults());

/// Per-extractor corpus counters:
///   idloc  — location mentions identified
///   tloc   — tweets with at least one mention
///   vloc   — identified mentions that geocode to at least one feature
///   tvloc  — tweets with at least one valid mention
/// plus the derived invalid counts.
struct LemStats {
  std::size_t idloc = 0;
  std::size_t tloc = 0;
  std::size_t vloc = 0;
  std::size_t tvloc = 0;
  std::size_t invalid_locations = 0;  // idloc - vloc
  std::size_t invalid_tweets = 0;     // tloc - tvloc
};

struct LemReportRow {
  std::string extractor;
  LemStats stats;
  std::size_t failed_tweets = 0;               // excluded from all denominators
  std::vector<std::string> failure_messages;
};

// Runs every extractor over the corpus, checking each identified mention
// occurrence against the index. Per-tweet extractor failures are recorded on
// the row and the tweet is excluded from that extractor's counts.
std::vector<LemReportRow> compare_lem_candidates(const GeoIndex& index,
                                                 const std::vector<LocationExtractor*>& extractors,
                                                 const std::vector<Tweet>& corpus);

std::string render_lem_report(const std::vector<LemReportRow>& rows);

}  // namespace tweetorigin
