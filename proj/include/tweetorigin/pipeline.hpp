#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tweetorigin/classifier.hpp"
#include "tweetorigin/lem.hpp"
#include "tweetorigin/locvec.hpp"
#include "tweetorigin/tweet.hpp"

namespace tweetorigin {

enum class Disposition {
  no_mentions,        // extractor found nothing
  no_valid_mentions,  // nothing survived filtering and the validity gate
  low_evidence,       // classifier rejected the tweet
  null_vectors,       // the conclusive vector came back empty on every slot
  geotagged,
};

std::string_view to_string(Disposition d);

struct GeotagResult {
  std::string tweet_id;
  std::vector<ExtractedLocation> mentions;  // post-filter, validity flags set
  std::optional<EvidenceLabel> label;
  std::vector<LocationVector> vectors;      // normalized, one per valid mention occurrence
  std::optional<LocationVector> conclusive; // set iff disposition == geotagged
  Disposition disposition = Disposition::no_mentions;
};

nlohmann::ordered_json geotag_result_to_json(const GeotagResult& r);
nlohmann::ordered_json location_vector_to_json(const LocationVector& v);

/// Pipeline wiring. The two geocode seams exist so tests can observe exactly
/// which stage touches the index: `validity_check` backs the pre-classifier
/// gate, `mention_geocode` produces the top feature for vector voting.
struct PipelineDeps {
  LocationExtractor* extractor = nullptr;
  EvidenceClassifier* classifier = nullptr;
  const CountryDict* countries = nullptr;
  MentionFilter filter = MentionFilter::defaults();
  std::function<bool(const std::string&)> validity_check;
  std::function<std::optional<GeoFeature>(const std::string&)> mention_geocode;

  static PipelineDeps standard(const GeoIndex& index, LocationExtractor& extractor,
                               EvidenceClassifier& classifier, const CountryDict& countries);
};

// Stages, in order: extract -> filter -> validity gate -> classify ->
// geocode valid mentions -> slot-wise vote. Each gate short-circuits: a tweet
// without mentions never reaches the classifier, a low-evidence tweet never
// geocodes its mentions for voting. Plugin failures propagate as exceptions.
GeotagResult geotag_tweet(const PipelineDeps& deps, const Tweet& tweet);

struct CorpusSummary {
  std::size_t total = 0;
  std::size_t failed = 0;
  std::size_t no_mentions = 0;
  std::size_t no_valid_mentions = 0;
  std::size_t low_evidence = 0;
  std::size_t null_vectors = 0;
  std::size_t geotagged = 0;

  std::size_t with_mentions = 0;        // extractor found >= 1 mention
  std::size_t with_valid_mentions = 0;  // >= 1 mention survived filter + validity
  std::size_t true_origin = 0;          // classifier said true origin
};

struct TweetFailure {
  std::string tweet_id;
  std::string message;
};

// Streams a JSON-lines corpus through geotag_tweet in bounded memory,
// emitting each result through `sink` in input order. Per-tweet failures
// (plugin transport errors, malformed lines) are counted, optionally
// collected, and never abort the run.
CorpusSummary geotag_corpus(const PipelineDeps& deps, std::istream& jsonl,
                            const std::function<void(const GeotagResult&)>& sink,
                            std::vector<TweetFailure>* failures = nullptr);

CorpusSummary geotag_corpus(const PipelineDeps& deps, const std::vector<Tweet>& corpus,
                            const std::function<void(const GeotagResult&)>& sink,
                            std::vector<TweetFailure>* failures = nullptr);

// Funnel rows in the shape of the evaluation overview: totals, mention
// gates, the two classes, and the count left for evaluation.
std::string render_funnel(const CorpusSummary& s);

}  // namespace tweetorigin
