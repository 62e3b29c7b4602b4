// SPDX-License-Identifier: Apache-2.0
//
// Client for Nominatim-compatible /search and /reverse endpoints.
//
// Every response body that parses is cached verbatim under its
// GeocodeCacheKey, including empty results; a warm cache therefore answers
// bit-identically to the network. Endpoints are used round-robin, each
// behind its own RateLimiter, and total concurrency is capped by
// max_in_flight. Concurrent lookups of one key share a single request.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "geocov/geocode_cache.hpp"
#include "geocov/place.hpp"
#include "geocov/rate_limiter.hpp"
#include "geocov/transport.hpp"

namespace geocov {

struct Endpoint {
  std::string url;  // e.g. "http://localhost:8080" or "https://host/nominatim"
  RateLimit limit;
};

struct GeocoderOptions {
  std::vector<Endpoint> endpoints;
  std::string user_agent = "geocov/1.0";
  std::string accept_language = "en";
  std::size_t max_in_flight = 64;
  /// Delay before each retry; its size is the retry budget.
  std::vector<std::chrono::milliseconds> backoff = {std::chrono::seconds(1),
                                                    std::chrono::seconds(4),
                                                    std::chrono::seconds(16)};
  int search_limit = 10;
  int reverse_zoom = 18;
};

enum class GeocodeStatus { kOk, kNotFound, kFailed };

struct SearchResult {
  GeocodeStatus status = GeocodeStatus::kOk;
  std::vector<ResolvedPlace> places;  // service order, best first
};

struct ReverseResult {
  GeocodeStatus status = GeocodeStatus::kNotFound;
  std::optional<ResolvedPlace> place;
};

struct GeocoderStats {
  std::uint64_t network_requests = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t retries = 0;
  std::uint64_t failures = 0;
};

/// Parses a /search body; nullopt when the body is not a JSON array.
std::optional<std::vector<ResolvedPlace>> parse_search_body(const std::string& body);
/// Parses a /reverse body; outer nullopt when malformed, inner when not found.
std::optional<std::optional<ResolvedPlace>> parse_reverse_body(const std::string& body);

class Geocoder {
 public:
  Geocoder(GeocoderOptions options, std::shared_ptr<Transport> transport,
           std::shared_ptr<GeocodeCache> cache,
           std::shared_ptr<TimeSource> time = SystemTime::instance());

  /// `query` must be non-empty; it is normalized before keying.
  SearchResult search(const std::string& query);
  /// Throws std::invalid_argument for out-of-range coordinates.
  ReverseResult reverse(double latitude, double longitude);

  GeocoderStats stats() const;
  GeocodeCache& cache() { return *cache_; }

 private:
  struct Fetched {
    bool ok = false;
    std::string body;
  };

  std::optional<std::string> body_for(const GeocodeCacheKey& key);
  Fetched fetch(const GeocodeCacheKey& key);
  HttpRequest build_request(const GeocodeCacheKey& key, std::size_t endpoint) const;
  void mark_failed(const std::string& key);
  bool known_failed(const std::string& key) const;

  GeocoderOptions options_;
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<GeocodeCache> cache_;
  std::shared_ptr<TimeSource> time_;
  std::vector<std::unique_ptr<RateLimiter>> limiters_;
  std::vector<std::pair<std::string, std::string>> origins_;  // (origin, path prefix)
  std::atomic<std::size_t> next_endpoint_{0};
  std::counting_semaphore<1 << 20> in_flight_;

  std::mutex pending_mu_;
  std::unordered_map<std::string, std::shared_future<Fetched>> pending_;

  mutable std::shared_mutex memo_mu_;
  std::unordered_map<std::string, SearchResult> search_memo_;
  std::unordered_map<std::string, ReverseResult> reverse_memo_;
  std::unordered_set<std::string> failed_;

  std::atomic<std::uint64_t> network_requests_{0};
  std::atomic<std::uint64_t> cache_hits_{0};
  std::atomic<std::uint64_t> retries_{0};
  std::atomic<std::uint64_t> failures_{0};
};

/// Serves recorded responses. Fixture file: one JSON object per line,
/// {"key": "<GeocodeCacheKey>", "status": 200, "body": "<verbatim body>"}.
/// Keys absent from the file answer like an empty Nominatim result.
class RecordedTransport final : public Transport {
 public:
  explicit RecordedTransport(const std::filesystem::path& fixtures);
  HttpResponse get(const HttpRequest& request) override;

  std::uint64_t requests() const { return requests_.load(); }
  std::size_t size() const { return responses_.size(); }
  /// Recorded (key, body) pairs with status 200.
  std::vector<std::pair<std::string, std::string>> successful() const;

  static std::string key_for(const HttpRequest& request);

 private:
  std::unordered_map<std::string, HttpResponse> responses_;
  std::atomic<std::uint64_t> requests_{0};
};

}  // namespace geocov
