#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "mw/core/warehouse.hpp"

namespace mw::api {

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

// Query-string parameters; the first value wins for repeated names.
using Params = std::map<std::string, std::string>;

// Read-only HTTP front end over an immutable warehouse snapshot.
//
// Routes:
//   GET /Visits?Code&Start_Date&End_Date
//   GET /Categories/Top?k&Start_Date&End_Date
//   GET /Hangouts?Code&State&k&Start_Date&End_Date
//   GET /health
// Errors carry {"error": {"field", "message"}}; bad or missing parameters
// give 400, unknown routes 404.
class ApiService {
 public:
  ApiService(Warehouse warehouse, std::string loaded_at);
  ~ApiService();
  ApiService(const ApiService&) = delete;
  ApiService& operator=(const ApiService&) = delete;

  // Loads the snapshot (LoadError on failure) and stamps the load time in UTC.
  static std::unique_ptr<ApiService> from_snapshot(const std::filesystem::path& dir);

  [[nodiscard]] ApiResponse handle(std::string_view path, const Params& params) const;

  // Binds host:port; port 0 picks a free port. Returns the bound port.
  // Throws IoError when the address cannot be bound.
  int bind(const std::string& host, int port);
  // Serves on the bound socket until stop(). Blocks.
  void run();
  void stop();
  void wait_until_ready() const;

  [[nodiscard]] const Warehouse& warehouse() const { return warehouse_; }

 private:
  struct Server;

  Warehouse warehouse_;
  std::string loaded_at_;
  std::unique_ptr<Server> server_;
};

// Splits "host:port"; IPv6 hosts in brackets. Throws ArgumentError.
std::pair<std::string, int> parse_bind_address(const std::string& address);

}  // namespace mw::api
