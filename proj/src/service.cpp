#include "tweetorigin/service.hpp"

#include <charconv>

#include <httplib.h>
#include <json.hpp>

namespace tweetorigin {

namespace {

void reply_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = message;
  reply_json(res, status, j);
}

bool parse_double_param(const httplib::Request& req, const char* name, double* out) {
  if (!req.has_param(name)) return false;
  const std::string raw = req.get_param_value(name);
  const char* begin = raw.data();
  const char* end = raw.data() + raw.size();
  const auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

struct Service::Impl {
  const GeoIndex* index;
  PipelineDeps deps;
  httplib::Server server;

  Impl(const GeoIndex& idx, PipelineDeps d) : index(&idx), deps(std::move(d)) { routes(); }

  void routes() {
    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      nlohmann::ordered_json j;
      j["status"] = "ok";
      j["entries"] = index->size();
      reply_json(res, 200, j);
    });

    server.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("q")) {
        reply_error(res, 400, "missing query parameter q");
        return;
      }
      std::size_t limit = 10;
      if (req.has_param("limit")) {
        const std::string raw = req.get_param_value("limit");
        std::uint64_t parsed = 0;
        const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), parsed);
        if (ec != std::errc() || ptr != raw.data() + raw.size() || parsed == 0) {
          reply_error(res, 400, "limit must be a positive integer");
          return;
        }
        limit = static_cast<std::size_t>(parsed);
      }
      auto features = nlohmann::ordered_json::array();
      for (const auto& f : index->forward(req.get_param_value("q"), limit)) {
        features.push_back(feature_to_json(f));
      }
      nlohmann::ordered_json j;
      j["features"] = std::move(features);
      reply_json(res, 200, j);
    });

    server.Get("/reverse", [this](const httplib::Request& req, httplib::Response& res) {
      double lon = 0.0;
      double lat = 0.0;
      if (!parse_double_param(req, "lon", &lon) || !parse_double_param(req, "lat", &lat)) {
        reply_error(res, 400, "lon and lat must be numbers");
        return;
      }
      if (lon < -180.0 || lon > 180.0 || lat < -90.0 || lat > 90.0) {
        reply_error(res, 400, "coordinates out of range");
        return;
      }
      try {
        reply_json(res, 200, feature_to_json(index->reverse(lon, lat)));
      } catch (const NoCoverageError& e) {
        reply_error(res, 404, e.what());
      }
    });

    server.Post("/geotag", [this](const httplib::Request& req, httplib::Response& res) {
      Tweet tweet;
      try {
        tweet = tweet_from_json_line(req.body);
      } catch (const std::exception& e) {
        reply_error(res, 400, std::string("bad tweet record: ") + e.what());
        return;
      }
      try {
        reply_json(res, 200, geotag_result_to_json(geotag_tweet(deps, tweet)));
      } catch (const TransportError& e) {
        reply_error(res, 502, e.what());
      } catch (const std::exception& e) {
        reply_error(res, 502, std::string("plugin failure: ") + e.what());
      }
    });
  }
};

Service::Service(const GeoIndex& index, PipelineDeps deps)
    : impl_(std::make_unique<Impl>(index, std::move(deps))) {}

Service::~Service() { stop(); }

bool Service::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
    if (port_ <= 0) return false;
  } else {
    if (!impl_->server.bind_to_port(host, port)) return false;
    port_ = port;
  }
  worker_ = std::thread([this] { impl_->server.listen_after_bind(); });
  // listen_after_bind needs a moment before the socket accepts
  impl_->server.wait_until_ready();
  return true;
}

bool Service::listen(const std::string& host, int port) {
  port_ = port;
  return impl_->server.listen(host, port);
}

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
  if (worker_.joinable()) worker_.join();
}

}  // namespace tweetorigin
