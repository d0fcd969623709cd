// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#pragma once

#include <memory>
#include <string>
#include <thread>

#include "relarec/experiment.hpp"

namespace httplib {
class Server;
}

namespace relarec {

// HTTP/1.1 JSON front end over an ExperimentEngine.
//
//   GET  /v1/recommendations?doc_id=&scenario=&k=
//          200 {"delivery_id": ..., "items": [{"rank", "doc_id", "title"}]}
//          400 missing/invalid parameter or unknown scenario
//          404 unknown document or no recommendations
//          503 scenario has no indexes attached
//   POST /v1/clicks  {"delivery_id": ..., "rank": ...}
//          204 stored (or already stored: clicks are idempotent)
//          400 malformed body, 404 unknown delivery, 422 invalid rank
//
// Arm identity stays hidden from clients so experiment arms are blind; the
// debug option adds `arm`, `fallback` (and `combo` when present) to
// recommendation responses for tests and operators.
//
// Requests are handled concurrently; all mutation funnels through the
// engine's serialized writers. The server never mutates indexes or models.
class RecommendationService {
 public:
  struct Options {
    bool debug = false;
    // Scenario used when the query string omits `scenario`; empty picks the
    // first configured scenario.
    std::string default_scenario;
  };

  RecommendationService(ExperimentEngine& engine, Options options);
  explicit RecommendationService(ExperimentEngine& engine)
      : RecommendationService(engine, Options()) {}
  ~RecommendationService();

  RecommendationService(const RecommendationService&) = delete;
  RecommendationService& operator=(const RecommendationService&) = delete;

  // Binds (port 0 = ephemeral) and serves on a background thread; returns
  // the bound port. Throws IoError when the address cannot be bound.
  int start(const std::string& host, int port);

  int port() const { return port_; }
  bool running() const;

  // Graceful: stop accepting, join the serving thread, flush the engine's
  // logs. Safe to call twice; the destructor calls it.
  void stop();

 private:
  void register_routes();

  ExperimentEngine& engine_;
  Options options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace relarec
