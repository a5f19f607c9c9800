// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <thread>

#include "scope/service/service.hpp"

namespace httplib {
class Server;
}

namespace scope::service {

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

HttpResponse json_response(int status, const nlohmann::json& payload);

// Runs fn and maps failures to error payloads: ClientError -> 400,
// ConformerStageError -> 422, anything else -> 500 with an opaque id (the
// details go to stderr). Shared by the HTTP routes and the CLI.
HttpResponse guarded(const std::function<HttpResponse()>& fn, const std::string& context);

// Routes, transport-independent. Every endpoint is reachable as /api/<name>
// and /api/v1/<name>:
//   POST search  {"smiles": s}                -> search payload
//   POST predict {"smiles": s, "top_k": k?}   -> predict payload
//   GET  dataset ?family=&split=              -> application/gzip archive
//   GET  health                               -> health payload
// Client errors give 400 with {"error": {"code", "message"}}; failures give
// 500 with an opaque id whose details go to stderr.
HttpResponse handle_request(const ServiceCore& core, const std::string& method, const std::string& path,
                            const std::string& body, const std::map<std::string, std::string>& query = {});

// HTTP server over handle_request. start() binds (port 0 picks a free port)
// and serves on a background thread.
class ApiServer {
 public:
  ApiServer(const ServiceCore& core, const ServiceConfig& config);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  int start();  // returns the bound port
  void wait();  // blocks until stop()
  void stop();

 private:
  const ServiceCore& core_;
  ServiceConfig config_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace scope::service
