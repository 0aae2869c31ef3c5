#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tweetorigin/errors.hpp"

namespace tweetorigin {

struct PreprocessedTweet {
  std::string original;
  std::string normalized;
};

/// Normalizes raw tweet text, in order: HTML entity decode, URL -> HTTPURL,
/// user mention -> @USER, emoji -> EMOJI, whitespace collapse. Idempotent.
PreprocessedTweet preprocess_tweet(const std::string& text);

enum class Evidence { true_origin = 0, low_evidence = 1 };

std::string_view to_string(Evidence e);

/// Two-class decision with the confidence of the chosen class.
struct EvidenceLabel {
  Evidence label = Evidence::low_evidence;
  double score = 0.0;
};

struct ClassifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BatchOutcome {
  std::vector<std::optional<EvidenceLabel>> labels;            // index-aligned with input
  std::vector<std::pair<std::size_t, std::string>> failures;   // (index, reason)
};

class EvidenceClassifier {
 public:
  virtual ~EvidenceClassifier() = default;
  virtual std::string name() const = 0;
  virtual EvidenceLabel classify(const PreprocessedTweet& tweet) = 0;

  // Order-preserving batch; the default maps classify() and records per-item
  // failures. The remote client overrides this with chunked requests.
  virtual BatchOutcome classify_many(const std::vector<PreprocessedTweet>& tweets);

  virtual bool concurrent_safe() const { return true; }
  virtual std::size_t max_in_flight() const { return 0; }  // 0 = unlimited
};

inline BatchOutcome classify_batch(EvidenceClassifier& plugin,
                                   const std::vector<PreprocessedTweet>& tweets) {
  return plugin.classify_many(tweets);
}

/// Keyword-cue stand-in for a trained evidence model: first-person and
/// present-deixis cues raise the origin score, retrospective cues lower it.
/// Pure function of the normalized text; ambiguity falls to low evidence.
class HeuristicClassifier final : public EvidenceClassifier {
 public:
  struct Options {
    double true_origin_cutoff = 0.5;
  };

  HeuristicClassifier() = default;
  explicit HeuristicClassifier(Options opts) : opts_(opts) {}

  std::string name() const override { return "heuristic"; }
  EvidenceLabel classify(const PreprocessedTweet& tweet) override;

 private:
  Options opts_;
};

// JSON lines: {"text": "...", "label": 0|1}; 0 is true origin.
std::unordered_map<std::string, Evidence> load_oracle_labels(const std::string& path);

/// Looks labels up by exact original text; meant for fixture-driven
/// end-to-end tests. Missing text -> ClassifyError.
class OracleClassifier final : public EvidenceClassifier {
 public:
  explicit OracleClassifier(std::unordered_map<std::string, Evidence> labels)
      : labels_(std::move(labels)) {}

  static OracleClassifier from_file(const std::string& path);

  std::string name() const override { return "oracle"; }
  EvidenceLabel classify(const PreprocessedTweet& tweet) override;

 private:
  std::unordered_map<std::string, Evidence> labels_;
};

/// Client for a remote evidence model server:
///   POST /classify {"texts": [...]} ->
///   {"labels": [0|1, ...], "scores": [[p0, p1], ...]}
/// Normalized text is truncated to 280 characters before dispatch.
class RemoteClassifier final : public EvidenceClassifier {
 public:
  struct Options {
    std::string base_url;
    int timeout_ms = 5000;
    std::size_t batch_size = 16;
    std::size_t max_inflight = 4;
  };

  explicit RemoteClassifier(Options opts);

  std::string name() const override { return "remote"; }
  EvidenceLabel classify(const PreprocessedTweet& tweet) override;
  BatchOutcome classify_many(const std::vector<PreprocessedTweet>& tweets) override;
  std::size_t max_in_flight() const override { return opts_.max_inflight; }

 private:
  std::vector<EvidenceLabel> request_chunk(const std::vector<std::string>& texts);

  Options opts_;
  std::shared_ptr<void> inflight_gate_;
};

}  // namespace tweetorigin
