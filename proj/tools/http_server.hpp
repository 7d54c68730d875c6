// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "webrouter/service.hpp"

namespace webrouter::cli {

/// cpp-httplib binding of RouteService: GET /health and POST /route.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const RouteService> service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to `port`, or an ephemeral port when 0. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);

  /// Blocks serving requests until stop() is called.
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace webrouter::cli
