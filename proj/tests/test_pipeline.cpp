#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "tweetorigin/pipeline.hpp"

using namespace tweetorigin;

namespace {

Tweet make_tweet(std::string id, std::string text) {
  Tweet t;
  t.id = std::move(id);
  t.text = std::move(text);
  return t;
}

std::optional<std::string> opt(const char* s) { return std::optional<std::string>(s); }

}  // namespace

TEST_CASE("geotag_tweet: tweet without mentions never reaches the classifier") {
  const auto& index = totest::fixture_index();
  BaselineExtractor extractor(index);
  HeuristicClassifier heuristic;
  totest::CountingClassifier counting(heuristic);
  auto deps = PipelineDeps::standard(index, extractor, counting, CountryDict::builtin());

  const auto result = geotag_tweet(deps, make_tweet("t1", "just thoughts, no places"));
  CHECK(result.disposition == Disposition::no_mentions);
  CHECK(result.mentions.empty());
  CHECK(!result.label);
  CHECK(!result.conclusive);
  CHECK(counting.calls == 0);
}

TEST_CASE("geotag_tweet: mentions that are all filtered also skip the classifier") {
  const auto& index = totest::fixture_index();
  BaselineExtractor extractor(index);
  HeuristicClassifier heuristic;
  totest::CountingClassifier counting(heuristic);
  auto deps = PipelineDeps::standard(index, extractor, counting, CountryDict::builtin());

  const auto result = geotag_tweet(deps, make_tweet("t2", "City of dreams, Earth of worries."));
  CHECK(result.disposition == Disposition::no_valid_mentions);
  CHECK(counting.calls == 0);
}

TEST_CASE("geotag_tweet: low evidence short-circuits before vector geocoding") {
  const auto& index = totest::fixture_index();
  BaselineExtractor extractor(index);
  OracleClassifier oracle({{std::string(
      "@MENTION and I traveled to #Miami at the beginning of June for his 30th Bday EMOJI and "
      "our 3 year anniversary EMOJI! Many of you were asking for travel tips amid COVID-19, so I "
      "finally put a blog together to help you..."), Evidence::low_evidence}});
  auto deps = PipelineDeps::standard(index, extractor, oracle, CountryDict::builtin());

  std::size_t vector_geocodes = 0;
  const auto inner = deps.mention_geocode;
  deps.mention_geocode = [&vector_geocodes, inner](const std::string& s) {
    ++vector_geocodes;
    return inner(s);
  };

  const auto result = geotag_tweet(
      deps, make_tweet("t3",
                       "@MENTION and I traveled to #Miami at the beginning of June for his 30th "
                       "Bday EMOJI and our 3 year anniversary EMOJI! Many of you were asking for "
                       "travel tips amid COVID-19, so I finally put a blog together to help "
                       "you..."));
  CHECK(result.disposition == Disposition::low_evidence);
  REQUIRE(result.label.has_value());
  CHECK(result.label->label == Evidence::low_evidence);
  CHECK(!result.conclusive);
  CHECK(result.vectors.empty());
  REQUIRE(result.mentions.size() == 1);
  CHECK(result.mentions[0].surface == "Miami");
  CHECK(result.mentions[0].valid == std::optional<bool>(true));
  CHECK(vector_geocodes == 0);
}

TEST_CASE("geotag_tweet: the full happy path composes vectors and votes") {
  const auto& index = totest::fixture_index();
  BaselineExtractor extractor(index);
  OracleClassifier oracle(
      {{"walking here in Carlton, Melbourne today", Evidence::true_origin}});
  auto deps = PipelineDeps::standard(index, extractor, oracle, CountryDict::builtin());

  const auto result =
      geotag_tweet(deps, make_tweet("t4", "walking here in Carlton, Melbourne today"));
  CHECK(result.disposition == Disposition::geotagged);
  REQUIRE(result.conclusive.has_value());
  CHECK(result.conclusive->district == opt("carlton"));
  CHECK(result.conclusive->county == opt("city of melbourne"));
  CHECK(result.conclusive->city == opt("melbourne"));
  CHECK(result.conclusive->state == opt("victoria"));
  CHECK(result.conclusive->country == opt("australia"));
  CHECK(result.vectors.size() == 2);
}

TEST_CASE("geotag_tweet: generic-poi mentions produce a null conclusive vector") {
  const auto& index = totest::fixture_index();
  BaselineExtractor extractor(index);
  OracleClassifier oracle({{"Ring Road traffic is wild right now.", Evidence::true_origin}});
  auto deps = PipelineDeps::standard(index, extractor, oracle, CountryDict::builtin());

  const auto result = geotag_tweet(deps, make_tweet("t5", "Ring Road traffic is wild right now."));
  CHECK(result.disposition == Disposition::null_vectors);
  CHECK(!result.conclusive);
  CHECK(result.vectors.size() == 1);
  CHECK(result.vectors[0].all_null());
}

TEST_CASE("geotag_tweet: extractor transport errors propagate") {
  const auto& index = totest::fixture_index();
  totest::ScriptedExtractor extractor;
  extractor.fail_texts = {"boom"};
  HeuristicClassifier heuristic;
  auto deps = PipelineDeps::standard(index, extractor, heuristic, CountryDict::builtin());
  CHECK_THROWS_AS(geotag_tweet(deps, make_tweet("t6", "boom")), TransportError);
}

TEST_CASE("geotag_corpus: empty corpus gives an all-zero summary") {
  const auto& index = totest::fixture_index();
  BaselineExtractor extractor(index);
  HeuristicClassifier heuristic;
  auto deps = PipelineDeps::standard(index, extractor, heuristic, CountryDict::builtin());
  std::istringstream empty("");
  const auto summary = geotag_corpus(deps, empty, nullptr);
  CHECK(summary.total == 0);
  CHECK(summary.geotagged == 0);
  CHECK(summary.failed == 0);
}

TEST_CASE("geotag_corpus: fixture corpus reproduces the hand-built funnel") {
  const auto& index = totest::fixture_index();
  BaselineExtractor extractor(index);
  auto oracle = OracleClassifier::from_file(totest::data_path("pipeline_labels.jsonl"));
  auto deps = PipelineDeps::standard(index, extractor, oracle, CountryDict::builtin());

  std::ifstream corpus(totest::data_path("pipeline_corpus.jsonl"));
  REQUIRE(corpus.good());
  std::vector<GeotagResult> results;
  std::vector<TweetFailure> failures;
  const auto summary = geotag_corpus(
      deps, corpus, [&results](const GeotagResult& r) { results.push_back(r); }, &failures);

  CHECK(failures.empty());
  CHECK(summary.total == 50);
  CHECK(summary.no_mentions == 8);
  CHECK(summary.no_valid_mentions == 7);
  CHECK(summary.low_evidence == 12);
  CHECK(summary.null_vectors == 3);
  CHECK(summary.geotagged == 20);
  CHECK(summary.with_mentions == 42);
  CHECK(summary.with_valid_mentions == 35);
  CHECK(summary.true_origin == 23);
  CHECK(summary.failed == 0);

  // dispositions plus failures partition the corpus
  CHECK(summary.no_mentions + summary.no_valid_mentions + summary.low_evidence +
            summary.null_vectors + summary.geotagged + summary.failed ==
        summary.total);

  // results arrive in corpus order
  REQUIRE(results.size() == 50);
  CHECK(results.front().tweet_id == "p-01");
  CHECK(results.back().tweet_id == "p-50");
  for (std::size_t i = 1; i < results.size(); ++i) {
    CHECK(results[i - 1].tweet_id < results[i].tweet_id);
  }

  // with the oracle and a gazetteer that knows every planted attribute-rich
  // mention, every such true-origin tweet lands on geotagged
  for (const auto& r : results) {
    const int n = std::stoi(r.tweet_id.substr(2));
    if (n >= 31) CHECK(r.disposition == Disposition::geotagged);
    if (n >= 28 && n <= 30) CHECK(r.disposition == Disposition::null_vectors);
    if (n >= 16 && n <= 27) CHECK(r.disposition == Disposition::low_evidence);
    if (n >= 9 && n <= 15) CHECK(r.disposition == Disposition::no_valid_mentions);
    if (n <= 8) CHECK(r.disposition == Disposition::no_mentions);
  }

  const auto funnel = render_funnel(summary);
  CHECK(funnel.find("total tweets") != std::string::npos);
  CHECK(funnel.find("50") != std::string::npos);
}

TEST_CASE("geotag_corpus: transport failures are counted, not fatal") {
  const auto& index = totest::fixture_index();
  totest::ScriptedExtractor extractor;
  extractor.planted["Melbourne calling"] = {"Melbourne"};
  extractor.fail_texts = {"this one breaks"};
  auto oracle = OracleClassifier({{"Melbourne calling", Evidence::true_origin}});
  auto deps = PipelineDeps::standard(index, extractor, oracle, CountryDict::builtin());

  const std::vector<Tweet> corpus{make_tweet("a", "this one breaks"),
                                  make_tweet("b", "Melbourne calling")};
  std::vector<TweetFailure> failures;
  std::vector<GeotagResult> results;
  const auto summary = geotag_corpus(
      deps, corpus, [&results](const GeotagResult& r) { results.push_back(r); }, &failures);
  CHECK(summary.total == 2);
  CHECK(summary.failed == 1);
  CHECK(summary.geotagged == 1);
  REQUIRE(failures.size() == 1);
  CHECK(failures[0].tweet_id == "a");
  REQUIRE(results.size() == 1);
  CHECK(results[0].tweet_id == "b");
}

TEST_CASE("geotag_corpus: malformed corpus lines are counted as failures") {
  const auto& index = totest::fixture_index();
  BaselineExtractor extractor(index);
  HeuristicClassifier heuristic;
  auto deps = PipelineDeps::standard(index, extractor, heuristic, CountryDict::builtin());
  std::istringstream corpus(
      "{\"id\":\"ok\",\"text\":\"no places\"}\n"
      "this is not json\n"
      "{\"id\":\"empty\",\"text\":\"  \"}\n");
  std::vector<TweetFailure> failures;
  const auto summary = geotag_corpus(deps, corpus, nullptr, &failures);
  CHECK(summary.total == 3);
  CHECK(summary.failed == 2);
  CHECK(summary.no_mentions == 1);
  REQUIRE(failures.size() == 2);
  CHECK(failures[0].tweet_id == "line:2");
  CHECK(failures[1].tweet_id == "line:3");
}

TEST_CASE("geotag result json has the documented shape") {
  const auto& index = totest::fixture_index();
  BaselineExtractor extractor(index);
  OracleClassifier oracle({{"off to Carlton", Evidence::true_origin}});
  auto deps = PipelineDeps::standard(index, extractor, oracle, CountryDict::builtin());
  const auto result = geotag_tweet(deps, make_tweet("tj", "off to Carlton"));
  const auto j = geotag_result_to_json(result);
  CHECK(j["tweet_id"] == "tj");
  CHECK(j["disposition"] == "geotagged");
  CHECK(j["label"] == "true_origin");
  CHECK(j["mentions"].size() == 1);
  CHECK(j["mentions"][0]["surface"] == "Carlton");
  CHECK(j["mentions"][0]["valid"] == true);
  CHECK(j["conclusive"]["city"] == "melbourne");
  CHECK(j["conclusive"]["district"] == "carlton");
  const auto dumped = j.dump();
  // fixed key order for byte-stable golden tests downstream
  CHECK(dumped.find("\"tweet_id\"") < dumped.find("\"disposition\""));
  CHECK(dumped.find("\"disposition\"") < dumped.find("\"label\""));
  CHECK(dumped.find("\"label\"") < dumped.find("\"mentions\""));
}
