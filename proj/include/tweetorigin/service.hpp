#pragma once

#include <memory>
#include <string>
#include <thread>

#include "tweetorigin/pipeline.hpp"

namespace tweetorigin {

/// Read-only HTTP front end over a shared immutable index:
///   GET  /health                     readiness
///   GET  /search?q=...&limit=...     {"features":[...]}
///   GET  /reverse?lon=...&lat=...    one feature payload
///   POST /geotag                     tweet record in, geotag result out
/// Re-indexing requires a restart; request handling never mutates state, so
/// identical requests return byte-identical bodies, serial or concurrent.
class Service {
 public:
  Service(const GeoIndex& index, PipelineDeps deps);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds and serves on a background thread. port 0 picks a free port.
  // Returns false when the bind fails.
  bool start(const std::string& host, int port = 0);

  // Blocking variant for the CLI.
  bool listen(const std::string& host, int port);

  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread worker_;
  int port_ = 0;
};

}  // namespace tweetorigin
