#pragma once

// Binds a Service to cpp-httplib. All routing happens in Service::handle.

#include <algorithm>
#include <cctype>
#include <memory>
#include <string>

#include "httplib.h"
#include "ppmlrank/service.hpp"

namespace ppmlrank {

inline HttpRequest to_service_request(const httplib::Request& in) {
  HttpRequest out;
  out.method = in.method;
  out.path = in.path;
  for (const auto& [key, value] : in.params) out.params.emplace_back(key, value);
  out.body = in.body;
  for (const auto& [key, value] : in.headers) {
    std::string name = key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    out.headers.emplace(std::move(name), value);
  }
  return out;
}

/// An httplib server forwarding every request under /api to `service`.
/// The service must outlive the returned server.
inline std::unique_ptr<httplib::Server> make_http_server(Service& service) {
  auto server = std::make_unique<httplib::Server>();
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const auto out = service.handle(to_service_request(req));
    res.status = out.status;
    for (const auto& [key, value] : out.headers) res.set_header(key, value);
    res.set_content(out.body, out.content_type);
  };
  server->Get(".*", forward);
  server->Post(".*", forward);
  server->Put(".*", forward);
  server->Delete(".*", forward);
  server->Patch(".*", forward);
  return server;
}

}  // namespace ppmlrank
