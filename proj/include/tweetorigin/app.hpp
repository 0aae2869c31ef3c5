#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tweetorigin/classifier.hpp"
#include "tweetorigin/evalkit.hpp"
#include "tweetorigin/gazetteer.hpp"
#include "tweetorigin/lem.hpp"
#include "tweetorigin/locvec.hpp"
#include "tweetorigin/pipeline.hpp"

namespace tweetorigin {

/// Key-value configuration ("key = value" lines, '#' comments). Exactly one
/// extractor and one classifier are selected. Paths and the bind address can
/// be overridden by TWEETORIGIN_* environment variables.
struct AppConfig {
  std::string gazetteer_path;
  std::string snapshot_path;
  std::string country_dict_path;

  std::string extractor = "baseline";  // baseline | remote
  std::string extractor_url;
  int extractor_timeout_ms = 5000;
  std::size_t extractor_max_inflight = 4;
  std::size_t ngram_window = 4;

  std::string classifier = "heuristic";  // heuristic | remote | oracle
  std::string classifier_url;
  int classifier_timeout_ms = 5000;
  std::size_t classifier_max_inflight = 4;
  std::size_t classifier_batch = 16;
  double classifier_cutoff = 0.5;
  std::string oracle_labels_path;

  std::vector<std::string> generic_filter = MentionFilter::defaults().generic_names;
  std::vector<std::uint64_t> band_edges = Bands::defaults().edges;

  std::string bind = "127.0.0.1";
  int port = 8080;
};

// Parses the config file; unknown keys and malformed values throw.
AppConfig load_config(const std::string& path);
AppConfig parse_config(std::string_view text, const std::string& origin);

// TWEETORIGIN_GAZETTEER, _SNAPSHOT, _COUNTRY_DICT, _ORACLE, _BIND, _PORT.
void apply_env_overrides(AppConfig& config);

// Throws std::invalid_argument on inconsistent selections (e.g. a remote
// extractor without a URL).
void validate_config(const AppConfig& config);

/// Everything a command needs, wired from one config: the index, the country
/// table, and the selected plugins. The index lives behind a stable pointer
/// because the baseline extractor keeps a reference to it.
struct Runtime {
  std::shared_ptr<const GeoIndex> index;
  CountryDict countries;
  std::unique_ptr<LocationExtractor> extractor;
  std::unique_ptr<EvidenceClassifier> classifier;
  AppConfig config;

  static Runtime open(const AppConfig& config, bool need_index = true);
  PipelineDeps deps() const;
};

}  // namespace tweetorigin
