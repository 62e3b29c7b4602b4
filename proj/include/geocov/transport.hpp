// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace geocov {

struct HttpRequest {
  std::string base_url;  // scheme://host[:port]
  std::string path;      // e.g. "/search"
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, std::string>> headers;

  std::string param(const std::string& key) const;
};

struct HttpResponse {
  int status = 0;  // 0: transport failure (no HTTP response)
  std::string body;
  std::map<std::string, std::string> headers;  // lowercase names
  std::string error;

  bool transport_failure() const { return status == 0; }
};

/// All network I/O goes through this seam so tests run hermetically.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const HttpRequest& request) = 0;
};

/// cpp-httplib backed transport; one keep-alive client per thread and host.
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::chrono::milliseconds timeout = std::chrono::seconds(30));
  HttpResponse get(const HttpRequest& request) override;

 private:
  std::chrono::milliseconds timeout_;
};

/// Fails every request; counts attempts. Used to prove a run is network-free.
class OfflineTransport final : public Transport {
 public:
  HttpResponse get(const HttpRequest& request) override;
  std::uint64_t requests() const { return requests_.load(); }

 private:
  std::atomic<std::uint64_t> requests_{0};
};

std::string url_encode(const std::string& value);

}  // namespace geocov
