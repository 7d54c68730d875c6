// Copyright (c) 2026 The WebRouter Authors
// SPDX-License-Identifier: Apache-2.0

#include "http_server.hpp"

#include <httplib.h>
#include <json.hpp>

namespace webrouter::cli {

struct HttpServer::Impl {
  std::shared_ptr<const RouteService> service;
  httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<const RouteService> service) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  const RouteService* svc = impl_->service.get();
  constexpr const char* kJson = "application/json";

  impl_->server.Get("/health", [svc](const httplib::Request&, httplib::Response& res) {
    const ServiceResponse r = svc->handle_health();
    res.status = r.status;
    res.set_content(r.body, kJson);
  });
  impl_->server.Post("/route", [svc](const httplib::Request& req, httplib::Response& res) {
    const ServiceResponse r = svc->handle_route(req.body);
    res.status = r.status;
    res.set_content(r.body, kJson);
  });
  impl_->server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(nlohmann::json{{"error", message}}.dump(), "application/json");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace webrouter::cli
