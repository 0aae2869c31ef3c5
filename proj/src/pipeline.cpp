#include "tweetorigin/pipeline.hpp"

#include <istream>
#include <sstream>

#include "tweetorigin/text.hpp"

namespace tweetorigin {

std::string_view to_string(Disposition d) {
  switch (d) {
    case Disposition::no_mentions: return "no_mentions";
    case Disposition::no_valid_mentions: return "no_valid_mentions";
    case Disposition::low_evidence: return "low_evidence";
    case Disposition::null_vectors: return "null_vectors";
    case Disposition::geotagged: return "geotagged";
  }
  return "unknown";
}

nlohmann::ordered_json location_vector_to_json(const LocationVector& v) {
  nlohmann::ordered_json j;
  for (std::size_t i = 0; i < LocationVector::kComponents; ++i) {
    const auto& slot = v.component(i);
    if (slot) {
      j[std::string(kComponentNames[i])] = *slot;
    } else {
      j[std::string(kComponentNames[i])] = nullptr;
    }
  }
  return j;
}

nlohmann::ordered_json geotag_result_to_json(const GeotagResult& r) {
  nlohmann::ordered_json j;
  j["tweet_id"] = r.tweet_id;
  j["disposition"] = std::string(to_string(r.disposition));
  if (r.label) {
    j["label"] = std::string(to_string(r.label->label));
    j["score"] = r.label->score;
  } else {
    j["label"] = nullptr;
    j["score"] = nullptr;
  }
  auto mentions = nlohmann::ordered_json::array();
  for (const auto& m : r.mentions) {
    nlohmann::ordered_json jm;
    jm["surface"] = m.surface;
    jm["start"] = m.begin;
    jm["end"] = m.end;
    if (m.valid) {
      jm["valid"] = *m.valid;
    } else {
      jm["valid"] = nullptr;
    }
    mentions.push_back(std::move(jm));
  }
  j["mentions"] = std::move(mentions);
  auto vectors = nlohmann::ordered_json::array();
  for (const auto& v : r.vectors) vectors.push_back(location_vector_to_json(v));
  j["vectors"] = std::move(vectors);
  j["conclusive"] = r.conclusive ? location_vector_to_json(*r.conclusive)
                                 : nlohmann::ordered_json(nullptr);
  return j;
}

PipelineDeps PipelineDeps::standard(const GeoIndex& index, LocationExtractor& extractor,
                                    EvidenceClassifier& classifier, const CountryDict& countries) {
  PipelineDeps deps;
  deps.extractor = &extractor;
  deps.classifier = &classifier;
  deps.countries = &countries;
  deps.validity_check = [&index](const std::string& surface) {
    return check_location_validity(index, surface);
  };
  deps.mention_geocode = [&index](const std::string& surface) -> std::optional<GeoFeature> {
    auto features = index.forward(surface, 1);
    if (features.empty()) return std::nullopt;
    return std::move(features.front());
  };
  return deps;
}

GeotagResult geotag_tweet(const PipelineDeps& deps, const Tweet& tweet) {
  GeotagResult result;
  result.tweet_id = tweet.id;

  const auto raw = deps.extractor->extract(tweet.text);
  if (raw.empty()) {
    result.disposition = Disposition::no_mentions;
    return result;
  }

  result.mentions = filter_mentions(raw, deps.filter);
  std::size_t valid_count = 0;
  for (auto& m : result.mentions) {
    m.valid = deps.validity_check(m.surface);
    if (*m.valid) ++valid_count;
  }
  if (valid_count == 0) {
    result.disposition = Disposition::no_valid_mentions;
    return result;
  }

  const PreprocessedTweet pre = preprocess_tweet(tweet.text);
  result.label = deps.classifier->classify(pre);
  if (result.label->label == Evidence::low_evidence) {
    result.disposition = Disposition::low_evidence;
    return result;
  }

  // each valid mention occurrence contributes its top feature's vector
  for (const auto& m : result.mentions) {
    if (!m.valid || !*m.valid) continue;
    const auto feature = deps.mention_geocode(m.surface);
    if (!feature) continue;
    result.vectors.push_back(normalize_vector(vector_from_feature(*feature), *deps.countries));
  }
  if (result.vectors.empty()) {
    result.disposition = Disposition::null_vectors;
    return result;
  }

  LocationVector conclusive = conclusive_vector(result.vectors);
  if (conclusive.all_null()) {
    result.disposition = Disposition::null_vectors;
    return result;
  }
  result.conclusive = std::move(conclusive);
  result.disposition = Disposition::geotagged;
  return result;
}

namespace {

void tally(CorpusSummary& summary, const GeotagResult& r) {
  switch (r.disposition) {
    case Disposition::no_mentions: ++summary.no_mentions; break;
    case Disposition::no_valid_mentions: ++summary.no_valid_mentions; break;
    case Disposition::low_evidence: ++summary.low_evidence; break;
    case Disposition::null_vectors: ++summary.null_vectors; break;
    case Disposition::geotagged: ++summary.geotagged; break;
  }
  if (r.disposition != Disposition::no_mentions) ++summary.with_mentions;
  if (r.disposition != Disposition::no_mentions &&
      r.disposition != Disposition::no_valid_mentions) {
    ++summary.with_valid_mentions;
  }
  if (r.label && r.label->label == Evidence::true_origin) ++summary.true_origin;
}

template <typename NextTweet>
CorpusSummary run_corpus(const PipelineDeps& deps, NextTweet&& next,
                         const std::function<void(const GeotagResult&)>& sink,
                         std::vector<TweetFailure>* failures) {
  CorpusSummary summary;
  for (;;) {
    std::string error_id;
    std::string error_message;
    Tweet tweet;
    const int got = next(tweet, error_id, error_message);
    if (got == 0) break;
    ++summary.total;
    if (got < 0) {
      ++summary.failed;
      if (failures) failures->push_back({error_id, error_message});
      continue;
    }
    try {
      const GeotagResult result = geotag_tweet(deps, tweet);
      tally(summary, result);
      if (sink) sink(result);
    } catch (const std::exception& e) {
      ++summary.failed;
      if (failures) failures->push_back({tweet.id, e.what()});
    }
  }
  return summary;
}

}  // namespace

CorpusSummary geotag_corpus(const PipelineDeps& deps, std::istream& jsonl,
                            const std::function<void(const GeotagResult&)>& sink,
                            std::vector<TweetFailure>* failures) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&](Tweet& tweet, std::string& error_id, std::string& error_message) -> int {
    while (std::getline(jsonl, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      try {
        tweet = tweet_from_json_line(line);
        return 1;
      } catch (const std::exception& e) {
        error_id = "line:" + std::to_string(lineno);
        error_message = e.what();
        return -1;
      }
    }
    return 0;
  };
  return run_corpus(deps, next, sink, failures);
}

CorpusSummary geotag_corpus(const PipelineDeps& deps, const std::vector<Tweet>& corpus,
                            const std::function<void(const GeotagResult&)>& sink,
                            std::vector<TweetFailure>* failures) {
  std::size_t i = 0;
  auto next = [&](Tweet& tweet, std::string&, std::string&) -> int {
    if (i >= corpus.size()) return 0;
    tweet = corpus[i++];
    return 1;
  };
  return run_corpus(deps, next, sink, failures);
}

std::string render_funnel(const CorpusSummary& s) {
  std::ostringstream out;
  const auto row = [&out](const char* label, std::size_t value) {
    char line[96];
    std::snprintf(line, sizeof line, "%-34s %zu\n", label, value);
    out << line;
  };
  row("total tweets", s.total);
  row("with >=1 location mention", s.with_mentions);
  row("with >=1 valid mention", s.with_valid_mentions);
  row("true origin", s.true_origin);
  row("low evidence", s.low_evidence);
  row("available for evaluation", s.geotagged);
  row("null conclusive vectors", s.null_vectors);
  row("failed", s.failed);
  return out.str();
}

}  // namespace tweetorigin
