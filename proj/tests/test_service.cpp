#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <thread>
#include <vector>

#include "support.hpp"
#include "tweetorigin/service.hpp"

using namespace tweetorigin;

namespace {

struct LiveService {
  BaselineExtractor extractor;
  OracleClassifier oracle;
  Service service;

  explicit LiveService(const GeoIndex& index)
      : extractor(index),
        oracle(OracleClassifier::from_file(totest::data_path("pipeline_labels.jsonl"))),
        service(index, PipelineDeps::standard(index, extractor, oracle, CountryDict::builtin())) {
    if (!service.start("127.0.0.1")) throw std::runtime_error("cannot start test service");
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", service.port());
    c.set_read_timeout(10, 0);
    return c;
  }
};

}  // namespace

TEST_CASE("service: health reports readiness and entry count") {
  LiveService live(totest::fixture_index());
  auto client = live.client();
  const auto res = client.Get("/health");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto j = nlohmann::json::parse(res->body);
  CHECK(j["status"] == "ok");
  CHECK(j["entries"] == 34);
}

TEST_CASE("service: search returns the documented payload, byte for byte") {
  LiveService live(totest::fixture_index());
  auto client = live.client();
  const auto res = client.Get("/search?q=melbourne%20uni&limit=1");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "application/json");
  // frozen wire bytes; the latitude repr carries the serializer's round-trip
  // digits and parses back to exactly -37.7970796
  const std::string expected =
      "{\"features\":[{\"coordinates\":[144.96130134,-37.797079600000004],\"properties\":{"
      "\"country\":\"Australia\",\"city\":\"Melbourne\",\"countrycode\":\"AU\","
      "\"postcode\":\"3010\",\"type\":\"poi\",\"street\":\"Grattan Street\","
      "\"district\":\"Parkville\",\"name\":\"University of Melbourne\","
      "\"state\":\"Victoria\"}}]}";
  CHECK(res->body == expected);
  const auto j = nlohmann::json::parse(res->body);
  CHECK(j["features"][0]["coordinates"][0].get<double>() == 144.96130134);
  CHECK(j["features"][0]["coordinates"][1].get<double>() == -37.7970796);
}

TEST_CASE("service: unmatched search query returns an empty feature list") {
  LiveService live(totest::fixture_index());
  auto client = live.client();
  const auto res = client.Get("/search?q=zzqxv");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body == "{\"features\":[]}");
}

TEST_CASE("service: search parameter validation") {
  LiveService live(totest::fixture_index());
  auto client = live.client();
  CHECK(client.Get("/search")->status == 400);
  CHECK(client.Get("/search?q=x&limit=0")->status == 400);
  CHECK(client.Get("/search?q=x&limit=banana")->status == 400);
}

TEST_CASE("service: reverse returns the nearest feature") {
  LiveService live(totest::fixture_index());
  auto client = live.client();
  const auto res = client.Get("/reverse?lon=144.96449828&lat=-37.80011159");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto j = nlohmann::json::parse(res->body);
  CHECK(j["properties"]["name"] == "700 Swanston Street");
  CHECK(j["properties"]["district"] == "Carlton");
  CHECK(j["properties"].size() == 9);
}

TEST_CASE("service: reverse validation and no-coverage") {
  LiveService live(totest::fixture_index());
  auto client = live.client();
  CHECK(client.Get("/reverse?lon=abc&lat=1")->status == 400);
  CHECK(client.Get("/reverse?lon=500&lat=1")->status == 400);
  CHECK(client.Get("/reverse?lon=1")->status == 400);

  const GeoIndex empty = build_index({});
  BaselineExtractor extractor(empty);
  HeuristicClassifier heuristic;
  Service service(empty, PipelineDeps::standard(empty, extractor, heuristic, CountryDict::builtin()));
  REQUIRE(service.start("127.0.0.1"));
  httplib::Client c("127.0.0.1", service.port());
  const auto res = c.Get("/reverse?lon=1&lat=1");
  REQUIRE(res);
  CHECK(res->status == 404);
}

TEST_CASE("service: geotag endpoint runs the full pipeline") {
  LiveService live(totest::fixture_index());
  auto client = live.client();
  nlohmann::json body;
  body["id"] = "svc-1";
  body["text"] =
      "Fun 3 Mile Interval Run along the Riverwalk! Supporting our beautiful city of Chicago, our "
      "beloved Tamale Guy who has recently been hospitaliized, fighting Covid-19 and yes, the "
      "USPS, I will always need stamps.";
  const auto res = client.Post("/geotag", body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto j = nlohmann::json::parse(res->body);
  CHECK(j["disposition"] == "geotagged");
  CHECK(j["label"] == "true_origin");
  CHECK(j["conclusive"]["city"] == "chicago");
  CHECK(j["conclusive"]["state"] == "illinois");
  CHECK(j["conclusive"]["country"] == "united states");
}

TEST_CASE("service: geotag rejects malformed tweets") {
  LiveService live(totest::fixture_index());
  auto client = live.client();
  CHECK(client.Post("/geotag", "not json", "application/json")->status == 400);
  CHECK(client.Post("/geotag", "{\"id\":\"x\"}", "application/json")->status == 400);
  CHECK(client.Post("/geotag", "{\"id\":\"x\",\"text\":\"  \"}", "application/json")->status ==
        400);
}

TEST_CASE("service: plugin transport failure maps to 502") {
  const auto& index = totest::fixture_index();
  BaselineExtractor extractor(index);
  RemoteClassifier dead({"http://127.0.0.1:1", 200, 1, 1});
  Service service(index, PipelineDeps::standard(index, extractor, dead, CountryDict::builtin()));
  REQUIRE(service.start("127.0.0.1"));
  httplib::Client client("127.0.0.1", service.port());
  nlohmann::json body;
  body["id"] = "svc-2";
  body["text"] = "hello Melbourne";
  const auto res = client.Post("/geotag", body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 502);
}

TEST_CASE("service: concurrent identical searches return byte-identical bodies") {
  LiveService live(totest::fixture_index());

  std::vector<std::string> queries;
  for (const auto& e : totest::fixture_index().entries()) queries.push_back(e.name);
  queries.push_back("zzqxv");

  // no doctest asserts inside worker threads: a failing REQUIRE would throw
  // across the thread boundary, so failures are encoded into the body list
  const auto fetch_all = [&](std::vector<std::string>& out) {
    httplib::Client client("127.0.0.1", live.service.port());
    client.set_read_timeout(10, 0);
    for (const auto& q : queries) {
      httplib::Params params{{"q", q}, {"limit", "5"}};
      const auto res = client.Get("/search", params, httplib::Headers{});
      if (!res || res->status != 200) {
        out.push_back("<<request failed>>");
      } else {
        out.push_back(res->body);
      }
    }
  };

  std::vector<std::string> serial;
  fetch_all(serial);
  for (const auto& body : serial) CHECK(body != "<<request failed>>");

  constexpr int kThreads = 4;
  std::vector<std::vector<std::string>> results(kThreads);
  std::vector<std::thread> threads;
  threads.reserve(kThreads);
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] { fetch_all(results[t]); });
  }
  for (auto& t : threads) t.join();
  for (const auto& r : results) CHECK(r == serial);
}
