#pragma once

// Shared fixture plumbing and independent oracles for the test suites. The
// oracles here deliberately re-derive results with the dumbest possible
// method (linear scans, rescans) so they stay independent of the library's
// index structures.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "tweetorigin/classifier.hpp"
#include "tweetorigin/gazetteer.hpp"
#include "tweetorigin/geo.hpp"
#include "tweetorigin/lem.hpp"
#include "tweetorigin/tweet.hpp"

namespace totest {

inline std::string data_path(const std::string& name) {
  return std::string(TWEETORIGIN_TEST_DATA_DIR) + "/" + name;
}

inline const tweetorigin::GeoIndex& fixture_index() {
  static const tweetorigin::GeoIndex index = [] {
    tweetorigin::LoadReport report;
    auto entries = tweetorigin::load_gazetteer(data_path("fixture_gazetteer.jsonl"), &report);
    if (report.skipped != 0) throw std::runtime_error("fixture gazetteer has bad lines");
    return tweetorigin::build_index(std::move(entries));
  }();
  return index;
}

// Brute-force nearest neighbor by haversine distance with the smaller-id tie
// rule; the oracle for every reverse-geocode check.
inline const tweetorigin::GazetteerEntry& brute_force_nearest(
    const std::vector<tweetorigin::GazetteerEntry>& entries, double lon, double lat) {
  const tweetorigin::GazetteerEntry* best = nullptr;
  double best_d = 0.0;
  for (const auto& e : entries) {
    const double d = tweetorigin::haversine_m(lon, lat, e.lon, e.lat);
    if (!best || d < best_d || (d == best_d && e.id < best->id)) {
      best = &e;
      best_d = d;
    }
  }
  return *best;
}

// Frequency-count vote oracle: counts by rescan, then walks the input in
// order so the first value reaching the maximal count wins.
inline std::optional<std::string> vote_oracle(
    const std::vector<std::optional<std::string>>& values) {
  std::size_t best_count = 0;
  std::optional<std::string> winner;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) continue;
    bool seen_before = false;
    for (std::size_t k = 0; k < i; ++k) {
      if (values[k] && *values[k] == *values[i]) {
        seen_before = true;
        break;
      }
    }
    if (seen_before) continue;
    std::size_t count = 0;
    for (const auto& v : values) {
      if (v && *v == *values[i]) ++count;
    }
    if (count > best_count) {
      best_count = count;
      winner = *values[i];
    }
  }
  return winner;
}

/// Test extractor that replays planted mention surfaces (looked up in the
/// text) and can be told to fail on specific tweets.
class ScriptedExtractor final : public tweetorigin::LocationExtractor {
 public:
  std::unordered_map<std::string, std::vector<std::string>> planted;  // text -> surfaces
  std::vector<std::string> fail_texts;
  std::size_t calls = 0;

  std::string name() const override { return "scripted"; }

  std::vector<tweetorigin::ExtractedLocation> extract(const std::string& text) override {
    ++calls;
    for (const auto& f : fail_texts) {
      if (f == text) throw tweetorigin::TransportError("scripted failure");
    }
    std::vector<tweetorigin::ExtractedLocation> out;
    const auto it = planted.find(text);
    if (it == planted.end()) return out;
    for (const auto& surface : it->second) {
      const auto pos = text.find(surface);
      if (pos == std::string::npos) {
        throw std::logic_error("planted surface not in text: " + surface);
      }
      tweetorigin::ExtractedLocation loc;
      loc.surface = surface;
      loc.begin = pos;
      loc.end = pos + surface.size();
      out.push_back(std::move(loc));
    }
    return out;
  }
};

/// Classifier wrapper that counts calls; used for the gate-order checks.
class CountingClassifier final : public tweetorigin::EvidenceClassifier {
 public:
  explicit CountingClassifier(tweetorigin::EvidenceClassifier& inner) : inner_(&inner) {}
  std::size_t calls = 0;

  std::string name() const override { return inner_->name(); }
  tweetorigin::EvidenceLabel classify(const tweetorigin::PreprocessedTweet& t) override {
    ++calls;
    return inner_->classify(t);
  }

 private:
  tweetorigin::EvidenceClassifier* inner_;
};

}  // namespace totest
