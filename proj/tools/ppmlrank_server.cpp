#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ppmlrank/http_server.hpp"

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTTP API over a framework catalog directory"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string catalog_dir;
  std::string submissions_dir;
  std::string token;
  app.add_option("--host", host, "Listen address")->capture_default_str();
  app.add_option("--port", port, "Listen port")->capture_default_str()->check(CLI::Range(1, 65535));
  app.add_option("--catalog", catalog_dir, "Catalog directory")->required();
  app.add_option("--submissions", submissions_dir, "Submissions directory")->required();
  app.add_option("--reviewer-token", token, "Token for review requests (default: $PPMLRANK_REVIEWER_TOKEN)");
  CLI11_PARSE(app, argc, argv);

  if (token.empty()) {
    if (const char* env = std::getenv("PPMLRANK_REVIEWER_TOKEN")) token = env;
  }
  if (token.empty()) std::cerr << "warning: no reviewer token set, review requests will be refused\n";

  try {
    ppmlrank::Service service({catalog_dir, submissions_dir, token});
    auto server = ppmlrank::make_http_server(service);
    g_server = server.get();
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "serving " << service.snapshot()->size() << " frameworks on http://" << host << ":" << port << "\n";
    if (!server->listen(host, port)) {
      std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
