#include <httplib.h>

#include "mw/api/api.hpp"
#include "mw/core/csv.hpp"
#include "mw/core/error.hpp"

namespace mw::api {

struct ApiService::Server {
  httplib::Server http;
};

ApiService::ApiService(Warehouse warehouse, std::string loaded_at)
    : warehouse_(std::move(warehouse)), loaded_at_(std::move(loaded_at)) {}

ApiService::~ApiService() = default;

int ApiService::bind(const std::string& host, int port) {
  server_ = std::make_unique<Server>();
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    Params params;
    for (const auto& [key, value] : req.params) params.emplace(key, value);
    const auto response = handle(req.path, params);
    res.status = response.status;
    res.set_content(response.body, "application/json");
  };
  server_->http.Get(".*", handler);
  // SO_REUSEADDR only: a second server on a busy port must fail to bind.
  server_->http.set_socket_options([](auto sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });

  const int bound = port == 0 ? server_->http.bind_to_any_port(host) : server_->http.bind_to_port(host, port) ? port : -1;
  if (bound <= 0) {
    server_.reset();
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void ApiService::run() {
  if (!server_) throw ArgumentError("run() called before bind()");
  server_->http.listen_after_bind();
}

void ApiService::stop() {
  if (server_) server_->http.stop();
}

void ApiService::wait_until_ready() const {
  if (server_) server_->http.wait_until_ready();
}

std::pair<std::string, int> parse_bind_address(const std::string& address) {
  std::string host;
  std::string port_text;
  if (!address.empty() && address.front() == '[') {
    const auto close = address.find(']');
    if (close == std::string::npos || close + 1 >= address.size() || address[close + 1] != ':') {
      throw ArgumentError("bind address must be host:port: " + address);
    }
    host = address.substr(1, close - 1);
    port_text = address.substr(close + 2);
  } else {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos) throw ArgumentError("bind address must be host:port: " + address);
    host = address.substr(0, colon);
    port_text = address.substr(colon + 1);
  }
  const auto port = csv::parse_int(port_text);
  if (host.empty() || !port || *port < 0 || *port > 65535) {
    throw ArgumentError("bind address must be host:port: " + address);
  }
  return {host, static_cast<int>(*port)};
}

}  // namespace mw::api
