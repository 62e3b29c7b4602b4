// SPDX-License-Identifier: Apache-2.0
//
// Persistent geocoder response cache. On disk it is an append-only file of
// JSON lines {"k": <key>, "v": <verbatim response body>}; the last line for
// a key wins and a torn final line is ignored on load.

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace geocov {

enum class QueryKind { kSearch, kReverse };

/// "search|<normalized query>" or "reverse|<lat>,<lon>" with both
/// coordinates rounded to 4 decimals (about 11 m).
struct GeocodeCacheKey {
  QueryKind kind;
  std::string payload;

  static GeocodeCacheKey search(std::string_view normalized_query);
  static GeocodeCacheKey reverse(double latitude, double longitude);
  static std::optional<GeocodeCacheKey> parse(std::string_view text);

  std::string str() const;
  friend bool operator==(const GeocodeCacheKey&, const GeocodeCacheKey&) = default;
};

/// Fixed "%.4f" rendering; negative zero prints as "0.0000".
std::string format_coordinate(double value);

class GeocodeCache {
 public:
  /// Memory-only cache.
  GeocodeCache() = default;
  /// Loads `path` if it exists and appends new entries to it.
  explicit GeocodeCache(const std::filesystem::path& path);
  ~GeocodeCache();
  GeocodeCache(const GeocodeCache&) = delete;
  GeocodeCache& operator=(const GeocodeCache&) = delete;

  std::optional<std::string> get(const std::string& key) const;
  /// Inserts and, for a persistent cache, appends one line and flushes.
  void put(const std::string& key, const std::string& body);

  std::size_t size() const;
  std::uint64_t lines_loaded() const { return lines_loaded_; }
  std::uint64_t lines_skipped() const { return lines_skipped_; }
  const std::filesystem::path& path() const { return path_; }

  /// Rewrites the file with one line per key (sorted), atomically.
  void compact();

  /// Copy of all entries; for inspection tools.
  std::unordered_map<std::string, std::string> entries() const;

 private:
  std::filesystem::path path_;
  std::FILE* out_ = nullptr;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::string> map_;
  std::uint64_t lines_loaded_ = 0;
  std::uint64_t lines_skipped_ = 0;
};

}  // namespace geocov
