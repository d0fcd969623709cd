// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include "relarec/service.hpp"

#include <chrono>
#include <cstdint>
#include <string_view>

#include <httplib.h>
#include <json.hpp>

#include "relarec/error.hpp"

namespace relarec {

namespace {

using ordered_json = nlohmann::ordered_json;

void reply_error(httplib::Response& res, int status, std::string_view message) {
  ordered_json body;
  body["error"] = std::string(message);
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Engine errors carry no status; the service maps them by kind and, for the
// plain Error cases, by the stable message prefixes the engine documents.
void reply_engine_error(httplib::Response& res, const Error& error) {
  const std::string_view message = error.what();
  if (dynamic_cast<const NotFoundError*>(&error) != nullptr) {
    reply_error(res, 404, message);
  } else if (message.starts_with("unknown scenario")) {
    reply_error(res, 400, message);
  } else if (message.starts_with("scenario not ready")) {
    reply_error(res, 503, message);
  } else if (message.starts_with("no recommendations")) {
    reply_error(res, 404, message);
  } else {
    reply_error(res, 500, message);
  }
}

}  // namespace

RecommendationService::RecommendationService(ExperimentEngine& engine,
                                             Options options)
    : engine_(engine),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()) {
  if (options_.default_scenario.empty() &&
      !engine_.config().scenarios.empty())
    options_.default_scenario = engine_.config().scenarios.front().name;
  register_routes();
}

RecommendationService::~RecommendationService() { stop(); }

void RecommendationService::register_routes() {
  server_->Get("/v1/recommendations", [this](const httplib::Request& req,
                                             httplib::Response& res) {
    if (!req.has_param("doc_id")) {
      reply_error(res, 400, "missing required parameter: doc_id");
      return;
    }
    const std::string doc_id = req.get_param_value("doc_id");
    const std::string scenario = req.has_param("scenario")
                                     ? req.get_param_value("scenario")
                                     : options_.default_scenario;
    std::optional<std::uint32_t> k;
    if (req.has_param("k")) {
      const std::string raw = req.get_param_value("k");
      char* end = nullptr;
      const unsigned long value = std::strtoul(raw.c_str(), &end, 10);
      if (raw.empty() || end != raw.c_str() + raw.size() || value < 1) {
        reply_error(res, 400, "parameter k must be a positive integer");
        return;
      }
      k = static_cast<std::uint32_t>(value);
    }

    try {
      const DeliveryRecord rec = engine_.deliver(scenario, doc_id, k);
      ordered_json body;
      body["delivery_id"] = rec.delivery_id;
      ordered_json items = ordered_json::array();
      for (std::size_t i = 0; i < rec.items.size(); ++i) {
        ordered_json item;
        item["rank"] = i + 1;
        item["doc_id"] = rec.items[i];
        item["title"] = engine_.corpus().get(rec.items[i]).title;
        items.push_back(std::move(item));
      }
      body["items"] = std::move(items);
      if (options_.debug) {
        body["arm"] = std::string(arm_name(rec.arm));
        body["fallback"] = rec.fallback;
        if (rec.combo) body["combo"] = std::string(rec.combo->name());
      }
      res.set_content(body.dump(), "application/json");
    } catch (const Error& error) {
      reply_engine_error(res, error);
    }
  });

  server_->Post("/v1/clicks", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    const ordered_json body = ordered_json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() ||
        !body.contains("delivery_id") || !body["delivery_id"].is_string() ||
        !body.contains("rank")) {
      reply_error(res, 400,
                  "click body must be a JSON object with delivery_id and rank");
      return;
    }
    if (!body["rank"].is_number_unsigned() ||
        body["rank"].get<std::uint64_t>() > 0xffffffffull) {
      reply_error(res, 422, "rank must be a positive integer");
      return;
    }
    try {
      engine_.record_click(body["delivery_id"].get<std::string>(),
                           body["rank"].get<std::uint32_t>());
      res.status = 204;  // idempotent: repeats acknowledge without storing
    } catch (const NotFoundError& error) {
      reply_error(res, 404, error.what());
    } catch (const Error& error) {
      reply_error(res, 422, error.what());
    }
  });
}

int RecommendationService::start(const std::string& host, int port) {
  if (running()) throw Error("service is already running");
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
  } else {
    if (!server_->bind_to_port(host, port))
      throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  port_ = bound;
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  for (int i = 0; i < 5000 && !server_->is_running(); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  if (!server_->is_running()) {
    thread_.join();
    throw IoError("server failed to start on " + host);
  }
  return bound;
}

bool RecommendationService::running() const {
  return server_->is_running();
}

void RecommendationService::stop() {
  if (thread_.joinable()) {
    server_->stop();
    thread_.join();
    engine_.flush();
  }
}

}  // namespace relarec
