// SPDX-License-Identifier: Apache-2.0
//
// Minimal in-process HTTP server for tests. It runs on 127.0.0.1 with an
// ephemeral port and records the arrival time of every request.

#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace geocov::testing {

struct StubRequest {
  std::string path;
  std::map<std::string, std::string> params;
  std::map<std::string, std::string> headers;  // names as sent
  std::chrono::steady_clock::time_point arrived;
};

struct StubResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

class StubServer {
 public:
  using Handler = std::function<StubResponse(const StubRequest&)>;

  explicit StubServer(Handler handler);
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  std::string base_url() const;
  int port() const { return port_; }

  std::vector<std::chrono::steady_clock::time_point> arrivals() const;
  std::size_t request_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

/// Largest number of arrivals inside any half-open window of length `window`.
std::size_t max_in_window(std::vector<std::chrono::steady_clock::time_point> arrivals,
                          std::chrono::steady_clock::duration window);

}  // namespace geocov::testing
