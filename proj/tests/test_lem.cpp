#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <set>
#include <thread>

#include "support.hpp"
#include "tweetorigin/lem.hpp"

using namespace tweetorigin;

namespace {

std::vector<std::string> surfaces(const std::vector<ExtractedLocation>& mentions) {
  std::vector<std::string> out;
  for (const auto& m : mentions) out.push_back(m.surface);
  return out;
}

}  // namespace

TEST_CASE("baseline extractor finds hashtag and plain mentions") {
  BaselineExtractor extractor(totest::fixture_index());
  const std::string text =
      "Love this bunch. Off to the Park for a morning walk in nature #NJ #NewJersey. First COVID "
      "Times visit to #Manhattan. HRH @MENTION & I, are in #NewYork for a few days.... #NYC here "
      "we are...";
  const auto mentions = extractor.extract(text);
  CHECK(surfaces(mentions) ==
        std::vector<std::string>{"Park", "NJ", "NewJersey", "Manhattan", "NewYork", "NYC"});
  for (const auto& m : mentions) {
    CHECK(m.surface == text.substr(m.begin, m.end - m.begin));
    CHECK(!m.valid.has_value());
  }
}

TEST_CASE("baseline extractor with an empty gazetteer finds nothing") {
  const GeoIndex empty = build_index({});
  BaselineExtractor extractor(empty);
  CHECK(extractor.extract("no places here").empty());
}

TEST_CASE("baseline extractor takes the maximal match") {
  BaselineExtractor extractor(totest::fixture_index());
  // "New York City" subsumes the shorter "York" and "New York" matches
  const auto mentions = extractor.extract("New York City is big");
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].surface == "New York City");
  // a bare "York" still matches on its own
  const auto bare = extractor.extract("thinking of York tonight");
  REQUIRE(bare.size() == 1);
  CHECK(bare[0].surface == "York");
}

TEST_CASE("baseline extractor never returns overlapping spans") {
  BaselineExtractor extractor(totest::fixture_index());
  const char* texts[] = {
      "New York City New York NYC york",
      "Carlton Melbourne Victoria Australia",
      "the hall central park ring road 42 L",
      "University of Melbourne melbourne uni unimelb",
  };
  for (const char* text : texts) {
    const auto mentions = extractor.extract(text);
    for (std::size_t i = 1; i < mentions.size(); ++i) {
      CHECK(mentions[i - 1].end <= mentions[i].begin);
    }
  }
}

TEST_CASE("baseline extraction spans always slice back to the surface") {
  BaselineExtractor extractor(totest::fixture_index());
  std::mt19937 rng(808);
  std::vector<std::string> pieces{"Melbourne", "#NYC",       "New York City", "the hall",
                                  "filler",    "nothing",    "42",            "#NewJersey,",
                                  "Carlton.",  "ring road",  "melbourne uni", "x"};
  std::uniform_int_distribution<std::size_t> piece_d(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len_d(0, 10);
  for (int round = 0; round < 200; ++round) {
    std::string text;
    const int n = len_d(rng);
    for (int i = 0; i < n; ++i) {
      if (!text.empty()) text.push_back(' ');
      text += pieces[piece_d(rng)];
    }
    if (text.empty()) continue;
    const auto mentions = extractor.extract(text);
    for (std::size_t i = 0; i < mentions.size(); ++i) {
      const auto& m = mentions[i];
      REQUIRE(m.end <= text.size());
      REQUIRE(m.begin < m.end);
      CHECK(m.surface == text.substr(m.begin, m.end - m.begin));
      if (i > 0) CHECK(mentions[i - 1].end <= m.begin);
    }
  }
}

TEST_CASE("check_location_validity") {
  const auto& index = totest::fixture_index();
  CHECK(check_location_validity(index, "Melbourne"));
  CHECK(!check_location_validity(index, "zzqxv"));
  // hashtag stripped by normalization
  CHECK(check_location_validity(index, "#NewYork"));
}

TEST_CASE("filter_mentions drops generic, numeric and too-short surfaces") {
  const auto make = [](const char* s) {
    ExtractedLocation m;
    m.surface = s;
    m.end = std::string(s).size();
    return m;
  };
  const std::vector<ExtractedLocation> input{make("earth"),  make("42"), make("NJ"),
                                             make("Earth"),  make("L"),  make("  x "),
                                             make("EUROPE"), make("Melbourne")};
  const auto kept = filter_mentions(input);
  CHECK(surfaces(kept) == std::vector<std::string>{"NJ", "Melbourne"});

  // idempotent and order-preserving
  const auto twice = filter_mentions(kept);
  CHECK(surfaces(twice) == surfaces(kept));
}

TEST_CASE("filter_mentions honors a custom generic list") {
  MentionFilter filter{{"gotham"}};
  ExtractedLocation m;
  m.surface = "Gotham";
  CHECK(filter_mentions({m}, filter).empty());
  m.surface = "earth";
  CHECK(filter_mentions({m}, filter).size() == 1);
}

TEST_CASE("harness: one tweet with one valid mention") {
  const auto& index = totest::fixture_index();
  totest::ScriptedExtractor scripted;
  scripted.planted["off to Melbourne"] = {"Melbourne"};
  Tweet tweet;
  tweet.id = "t1";
  tweet.text = "off to Melbourne";
  const auto rows = compare_lem_candidates(index, {&scripted}, {tweet});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].stats.idloc == 1);
  CHECK(rows[0].stats.tloc == 1);
  CHECK(rows[0].stats.vloc == 1);
  CHECK(rows[0].stats.tvloc == 1);
  CHECK(rows[0].stats.invalid_locations == 0);
  CHECK(rows[0].stats.invalid_tweets == 0);
  CHECK(rows[0].failed_tweets == 0);
}

TEST_CASE("harness reproduces the hand-enumerated fixture counts") {
  const auto& index = totest::fixture_index();
  const auto corpus = read_corpus(totest::data_path("lem_corpus.jsonl"));
  REQUIRE(corpus.size() == 20);

  BaselineExtractor baseline(index);

  totest::ScriptedExtractor scripted;
  const auto text_of = [&corpus](const char* id) -> const std::string& {
    for (const auto& t : corpus) {
      if (t.id == id) return t.text;
    }
    throw std::logic_error("no such tweet id");
  };
  scripted.planted[text_of("l-01")] = {"Park", "Manhattan", "COVID"};
  scripted.planted[text_of("l-03")] = {"Carlton", "Melbourne"};
  scripted.planted[text_of("l-04")] = {"bay"};
  scripted.planted[text_of("l-05")] = {"Riverwalk", "Chicago"};
  scripted.planted[text_of("l-06")] = {"bagels"};
  scripted.planted[text_of("l-07")] = {"City"};
  scripted.planted[text_of("l-09")] = {"42"};
  scripted.planted[text_of("l-10")] = {"coffee"};
  scripted.planted[text_of("l-11")] = {"University of Melbourne", "oval"};
  scripted.planted[text_of("l-12")] = {"Yakima"};
  scripted.planted[text_of("l-13")] = {"Sydney", "Dublin", "nowhere"};
  scripted.planted[text_of("l-14")] = {"Central Park"};
  scripted.planted[text_of("l-15")] = {"New South Wales"};
  scripted.planted[text_of("l-17")] = {"Brooklyn", "Manhattan", "pizza"};
  scripted.planted[text_of("l-19")] = {"Vic", "Carlton"};
  scripted.planted[text_of("l-20")] = {"Earth", "music"};
  scripted.fail_texts = {text_of("l-08")};

  const auto rows = compare_lem_candidates(index, {&baseline, &scripted}, corpus);
  REQUIRE(rows.size() == 2);

  // baseline: hand-enumerated over the 20 fixture tweets
  CHECK(rows[0].extractor == "baseline");
  CHECK(rows[0].stats.idloc == 28);
  CHECK(rows[0].stats.tloc == 17);
  CHECK(rows[0].stats.vloc == 28);
  CHECK(rows[0].stats.tvloc == 17);
  CHECK(rows[0].stats.invalid_locations == 0);
  CHECK(rows[0].stats.invalid_tweets == 0);
  CHECK(rows[0].failed_tweets == 0);

  // scripted: 8 planted invalid surfaces, 3 tweets with no valid mention,
  // one tweet that fails outright
  CHECK(rows[1].extractor == "scripted");
  CHECK(rows[1].stats.idloc == 27);
  CHECK(rows[1].stats.tloc == 16);
  CHECK(rows[1].stats.vloc == 19);
  CHECK(rows[1].stats.tvloc == 13);
  CHECK(rows[1].stats.invalid_locations == 8);
  CHECK(rows[1].stats.invalid_tweets == 3);
  CHECK(rows[1].failed_tweets == 1);

  // arithmetic invariants hold on every row
  for (const auto& row : rows) {
    CHECK(row.stats.vloc <= row.stats.idloc);
    CHECK(row.stats.tvloc <= row.stats.tloc);
    CHECK(row.stats.invalid_locations == row.stats.idloc - row.stats.vloc);
    CHECK(row.stats.invalid_tweets == row.stats.tloc - row.stats.tvloc);
  }

  const auto table = render_lem_report(rows);
  CHECK(table.find("baseline") != std::string::npos);
  CHECK(table.find("28") != std::string::npos);
}

TEST_CASE("remote extractor round trip against a local server") {
  httplib::Server server;
  std::size_t hits = 0;
  server.Post("/extract", [&hits](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    const auto body = nlohmann::json::parse(req.body);
    const std::string text = body["texts"][0].get<std::string>();
    nlohmann::json entity;
    entity["surface"] = "ignored by the client";
    entity["start"] = text.find("Carlton");
    entity["end"] = text.find("Carlton") + 7;
    nlohmann::json out;
    out["entities"] = {{entity}};
    res.set_content(out.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&server] { server.listen_after_bind(); });
  server.wait_until_ready();

  RemoteExtractor extractor({"http://127.0.0.1:" + std::to_string(port), 2000, 2});
  const auto mentions = extractor.extract("walking around Carlton today");
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].surface == "Carlton");  // re-sliced from the span
  CHECK(mentions[0].begin == 15);
  CHECK(mentions[0].end == 22);
  CHECK(hits == 1);

  server.stop();
  worker.join();
}

TEST_CASE("remote extractor surfaces transport problems") {
  SUBCASE("unreachable endpoint") {
    RemoteExtractor extractor({"http://127.0.0.1:1", 200, 1});
    CHECK_THROWS_AS(extractor.extract("anything"), TransportError);
  }

  SUBCASE("malformed body and out-of-range span") {
    httplib::Server server;
    std::string payload;
    server.Post("/extract", [&payload](const httplib::Request&, httplib::Response& res) {
      res.set_content(payload, "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread worker([&server] { server.listen_after_bind(); });
    server.wait_until_ready();
    RemoteExtractor extractor({"http://127.0.0.1:" + std::to_string(port), 2000, 1});

    payload = "this is not json";
    CHECK_THROWS_AS(extractor.extract("text"), TransportError);
    payload = R"({"entities":[[{"surface":"x","start":0,"end":999}]]})";
    CHECK_THROWS_AS(extractor.extract("text"), TransportError);
    payload = R"({"entities":"wrong"})";
    CHECK_THROWS_AS(extractor.extract("text"), TransportError);

    server.stop();
    worker.join();
  }

  SUBCASE("harness records the failure and keeps going") {
    const auto& index = totest::fixture_index();
    RemoteExtractor extractor({"http://127.0.0.1:1", 200, 1});
    Tweet tweet;
    tweet.id = "t1";
    tweet.text = "Melbourne";
    const auto rows = compare_lem_candidates(index, {&extractor}, {tweet});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].failed_tweets == 1);
    CHECK(rows[0].stats.idloc == 0);
    REQUIRE(rows[0].failure_messages.size() == 1);
    CHECK(rows[0].failure_messages[0].find("t1") != std::string::npos);
  }
}
