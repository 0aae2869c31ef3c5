#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tweetorigin/classifier.hpp"
#include "tweetorigin/gazetteer.hpp"
#include "tweetorigin/locvec.hpp"
#include "tweetorigin/pipeline.hpp"
#include "tweetorigin/tweet.hpp"

namespace tweetorigin {

// Reverse geocodes the tweet's own coordinates into a normalized location
// vector. Throws std::runtime_error("not geotagged") without coordinates.
LocationVector ground_truth_vector(const GeoIndex& index, const Tweet& tweet,
                                   const CountryDict& dict);

struct LevelCount {
  std::size_t correct = 0;
  std::size_t incorrect = 0;

  std::size_t evaluable() const { return correct + incorrect; }
  // Undefined (not zero) when nothing was evaluable at this level.
  std::optional<double> accuracy() const {
    if (evaluable() == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(evaluable());
  }
};

struct LevelAccuracy {
  LevelCount country;
  LevelCount state;
  LevelCount city;
  LevelCount county;
  LevelCount district;
};

/// Scores conclusive vectors against ground truth. A tweet is evaluable at a
/// level iff the truth slot is set there; a conclusive null on an evaluable
/// slot counts as incorrect. Both sides are expected in normalized form
/// (trimmed, case-folded, country-normalized), as produced by the pipeline
/// and ground_truth_vector.
/// Preconditions: every result has disposition == geotagged and a truth
/// entry; violations throw std::invalid_argument.
LevelAccuracy evaluate(const std::vector<GeotagResult>& results,
                       const std::unordered_map<std::string, LocationVector>& truths);

std::string render_level_accuracy(const LevelAccuracy& acc);
std::string level_accuracy_csv(const LevelAccuracy& acc);
std::string level_accuracy_jsonl(const LevelAccuracy& acc);  // one record per level

// Inter-annotator agreement: (p_o - p_e) / (1 - p_e) with chance agreement
// from the marginal label frequencies. Perfect agreement returns 1 even when
// p_e == 1. Throws std::invalid_argument on empty or unequal-length input.
double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);

enum class Dimension {
  overall,
  possibly_sensitive,
  media,
  user_verified,
  followers_band,
  friends_band,
  created_year,
  country,
  source,
};

std::string_view to_string(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view s);

/// Count-band edges for followers/friends breakdowns. The final band is
/// open-ended ("5M+"); the rest are half-open [edge[i], edge[i+1]).
struct Bands {
  std::vector<std::uint64_t> edges;

  static Bands defaults();  // 18 bands from 0-50 up to 5M+
  std::size_t band_count() const { return edges.size(); }
  std::size_t band_for(std::uint64_t value) const;
  std::string label_for(std::size_t band) const;
};

struct BucketStats {
  std::size_t true_origin = 0;
  std::size_t low_evidence = 0;

  std::size_t total() const { return true_origin + low_evidence; }
  std::optional<double> proportion_true() const {
    if (total() == 0) return std::nullopt;
    return static_cast<double>(true_origin) / static_cast<double>(total());
  }
};

struct DistributionReport {
  Dimension dimension = Dimension::overall;
  std::size_t total = 0;
  // exhaustive and disjoint over the classified corpus
  std::vector<std::pair<std::string, BucketStats>> buckets;
};

struct DistributionOptions {
  Bands bands = Bands::defaults();
  const GeoIndex* index = nullptr;        // used by the country dimension
  const CountryDict* countries = nullptr; // defaults to the builtin table
};

DistributionReport distributions(const std::vector<std::pair<Tweet, EvidenceLabel>>& classified,
                                 Dimension dimension,
                                 const DistributionOptions& opts = DistributionOptions{});

std::string render_distribution(const DistributionReport& report);
std::string distribution_csv(const DistributionReport& report);
std::string distribution_jsonl(const DistributionReport& report);  // one record per bucket

}  // namespace tweetorigin
