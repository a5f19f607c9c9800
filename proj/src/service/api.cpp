// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/service/api.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <iostream>

#include "httplib.h"
#include "scope/util/hash.hpp"

namespace scope::service {

using nlohmann::json;

HttpResponse json_response(int status, const json& payload) { return {status, "application/json", render(payload), {}}; }

namespace {

HttpResponse error_response(int status, const std::string& code, const std::string& message) {
  return json_response(status, {{"error", {{"code", code}, {"message", message}}}});
}

std::string incident_id() {
  static std::atomic<std::uint64_t> counter{0};
  const auto now = std::chrono::system_clock::now().time_since_epoch().count();
  return sha256_hex(fmt::format("{}:{}", now, counter++)).substr(0, 16);
}

// "/api/search" and "/api/v1/search" -> "search"; empty when not an API path.
std::string endpoint(const std::string& path) {
  for (const std::string prefix : {"/api/v1/", "/api/"}) {
    if (path.rfind(prefix, 0) == 0) return path.substr(prefix.size());
  }
  return {};
}

struct MalformedJson {};

json parse_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw MalformedJson{};
  if (!j.is_object()) throw ClientError("request body must be a JSON object");
  return j;
}

std::string smiles_field(const json& j) {
  const auto it = j.find("smiles");
  if (it == j.end() || !it->is_string()) throw ClientError("field 'smiles' (string) is required");
  return it->get<std::string>();
}

std::optional<std::size_t> top_k_field(const json& j) {
  const auto it = j.find("top_k");
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer() || it->get<long long>() <= 0) throw ClientError("field 'top_k' must be a positive integer");
  return static_cast<std::size_t>(it->get<long long>());
}

std::optional<std::string> query_value(const std::map<std::string, std::string>& query, const std::string& key) {
  const auto it = query.find(key);
  if (it == query.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

}  // namespace

HttpResponse handle_request(const ServiceCore& core, const std::string& method, const std::string& path,
                            const std::string& body, const std::map<std::string, std::string>& query) {
  const std::string name = endpoint(path);
  const std::map<std::string, std::string> methods = {
      {"search", "POST"}, {"predict", "POST"}, {"dataset", "GET"}, {"health", "GET"}};
  const auto route = methods.find(name);
  if (route == methods.end()) return error_response(404, "not_found", fmt::format("no endpoint {}", path));
  if (route->second != method) {
    auto r = error_response(405, "method_not_allowed", fmt::format("{} expects {}", path, route->second));
    r.headers["Allow"] = route->second;
    return r;
  }
  return guarded(
      [&]() -> HttpResponse {
        if (name == "health") return json_response(200, core.health_payload());
        if (name == "dataset") {
          ExportFilter filter{query_value(query, "family"), query_value(query, "split")};
          HttpResponse r{200, "application/gzip", core.export_dataset(filter), {}};
          r.headers["Content-Disposition"] = "attachment; filename=\"scope-dataset.tar.gz\"";
          return r;
        }
        const json request = parse_body(body);
        if (name == "search") return json_response(200, core.search_payload(smiles_field(request)));
        return json_response(200, core.predict_payload(smiles_field(request), top_k_field(request)));
      },
      method + " " + path);
}

HttpResponse guarded(const std::function<HttpResponse()>& fn, const std::string& context) {
  try {
    return fn();
  } catch (const MalformedJson&) {
    return error_response(400, "malformed_json", "request body is not valid JSON");
  } catch (const ClientError& e) {
    const bool smiles = std::string_view(e.what()).rfind("invalid SMILES", 0) == 0;
    return error_response(400, smiles ? "invalid_smiles" : "bad_request", e.what());
  } catch (const ConformerStageError& e) {
    return error_response(422, "conformer_failed", e.what());
  } catch (const std::exception& e) {
    const std::string id = incident_id();
    std::cerr << fmt::format("[scope] incident {} in {}: {}\n", id, context, e.what());
    return json_response(500, {{"error", {{"code", "internal"}, {"id", id}}}});
  }
}

ApiServer::ApiServer(const ServiceCore& core, const ServiceConfig& config)
    : core_(core), config_(config), server_(std::make_unique<httplib::Server>()) {
  auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const HttpResponse r = handle_request(core_, req.method, req.path, req.body, query);
    res.status = r.status;
    for (const auto& [k, v] : r.headers) res.set_header(k, v);
    res.set_content(r.body, r.content_type);
  };
  server_->Get(R"(/api/.*)", adapt);
  server_->Post(R"(/api/.*)", adapt);
  server_->Put(R"(/api/.*)", adapt);
  server_->Delete(R"(/api/.*)", adapt);
  if (config_.static_dir) server_->set_mount_point("/", config_.static_dir->string());
  server_->new_task_queue = [workers = config_.workers] { return new httplib::ThreadPool(std::max(2u, workers)); };
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::start() {
  port_ = config_.port == 0 ? server_->bind_to_any_port(config_.host)
                            : (server_->bind_to_port(config_.host, config_.port) ? config_.port : -1);
  if (port_ <= 0) throw IoError(fmt::format("cannot bind {}:{}", config_.host, config_.port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void ApiServer::wait() {
  if (thread_.joinable()) thread_.join();
}

void ApiServer::stop() {
  if (server_) server_->stop();
  wait();
}

}  // namespace scope::service
