// SPDX-License-Identifier: Apache-2.0

#include "geocov/transport.hpp"

#include <cctype>
#include <memory>
#include <unordered_map>

#include "httplib.h"

namespace geocov {

std::string HttpRequest::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return {};
}

std::string url_encode(const std::string& value) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(value.size() * 3);
  for (const unsigned char c : value) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

HttpTransport::HttpTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

HttpResponse HttpTransport::get(const HttpRequest& request) {
  thread_local std::unordered_map<std::string, std::unique_ptr<httplib::Client>> clients;
  auto& client = clients[request.base_url];
  if (!client) {
    client = std::make_unique<httplib::Client>(request.base_url);
    client->set_keep_alive(true);
    client->set_connection_timeout(timeout_);
    client->set_read_timeout(timeout_);
  }

  std::string target = request.path;
  char sep = '?';
  for (const auto& [k, v] : request.params) {
    target += sep;
    target += url_encode(k);
    target += '=';
    target += url_encode(v);
    sep = '&';
  }
  httplib::Headers headers;
  for (const auto& [k, v] : request.headers) headers.emplace(k, v);

  HttpResponse out;
  auto result = client->Get(target, headers);
  if (!result) {
    out.error = httplib::to_string(result.error());
    client.reset();
    return out;
  }
  out.status = result->status;
  out.body = std::move(result->body);
  for (const auto& [k, v] : result->headers) {
    std::string lower = k;
    for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    out.headers[lower] = v;
  }
  return out;
}

HttpResponse OfflineTransport::get(const HttpRequest&) {
  ++requests_;
  HttpResponse r;
  r.error = "offline";
  return r;
}

}  // namespace geocov
