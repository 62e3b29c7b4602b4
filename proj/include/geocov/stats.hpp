// SPDX-License-Identifier: Apache-2.0
//
// One-pass, mergeable corpus statistics. Memory grows with the number of
// distinct users, days and location keys, never with the tweet count.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "geocov/resolve.hpp"
#include "geocov/tweet.hpp"

namespace geocov {

enum class SeriesKey { kCountry, kCity, kLanguage };

struct UserCounts {
  std::uint64_t users = 0;
  std::uint64_t with_geo = 0;             // posted at least one GPS-tagged tweet
  std::uint64_t with_place = 0;           // tagged at least one tweet with a place
  std::uint64_t with_location_value = 0;  // profile location resolved at least once

  friend bool operator==(const UserCounts&, const UserCounts&) = default;
};

class CorpusSummary {
 public:
  using Counts = std::map<std::string, std::uint64_t>;
  using Series = std::map<std::string, Counts>;  // key -> date -> count

  /// `priority` picks the slot that attributes country/city volume.
  explicit CorpusSummary(std::vector<Source> priority = {std::begin(kSourcesByTrust),
                                                          std::end(kSourcesByTrust)});

  void add(const RawTweet& tweet, const GeoRecord* record);
  /// Folds a disjoint shard into this summary.
  void merge(const CorpusSummary& other);

  std::uint64_t total_tweets() const { return total_; }
  const Counts& daily_counts() const { return daily_; }
  const Counts& language_counts() const { return languages_; }
  const Counts& country_counts() const { return countries_; }
  const Counts& city_counts() const { return cities_; }
  /// Tweets with each GeoRecord slot filled, in trust order.
  const std::array<std::uint64_t, 4>& source_counts() const { return sources_; }
  const Series& series(SeriesKey key) const;

  UserCounts all_users() const;
  UserCounts verified_users() const;

  friend bool operator==(const CorpusSummary&, const CorpusSummary&) = default;

  static constexpr const char* kUnknownDate = "unknown";
  static constexpr const char* kUndeterminedLanguage = "und";

 private:
  enum : std::uint8_t { kVerified = 1, kGeo = 2, kPlace = 4, kLocation = 8 };

  std::vector<Source> priority_;
  std::uint64_t total_ = 0;
  Counts daily_, languages_, countries_, cities_;
  std::array<std::uint64_t, 4> sources_{};
  Series country_series_, city_series_, language_series_;
  std::unordered_map<std::uint64_t, std::uint8_t> users_;
};

/// Key used for city volume: "<city>, <country_code>".
std::string city_key(const ResolvedPlace& place);

struct BucketRow {
  std::uint64_t threshold = 0;
  std::string label;  // e.g. ">10M"
  std::uint64_t entities = 0;

  friend bool operator==(const BucketRow&, const BucketRow&) = default;
};

inline const std::vector<std::uint64_t> kCountryThresholds = {10'000'000, 1'000'000, 500'000,
                                                              100'000};
inline const std::vector<std::uint64_t> kCityThresholds = {1'000'000, 500'000, 100'000, 50'000};

/// Cumulative "more than threshold" entity counts. Thresholds must be
/// strictly descending (std::invalid_argument otherwise).
std::vector<BucketRow> bucket_table(const std::map<std::string, std::uint64_t>& counts,
                                    const std::vector<std::uint64_t>& thresholds);

std::string threshold_label(std::uint64_t threshold);

/// The n keys with the largest totals (ties by key), as a date x key CSV.
/// Throws std::invalid_argument for n <= 0.
std::string top_n_series(const CorpusSummary& summary, SeriesKey key, int n);
std::vector<std::string> top_keys(const CorpusSummary& summary, SeriesKey key, int n);

struct StatsReportOptions {
  std::vector<std::uint64_t> country_thresholds = kCountryThresholds;
  std::vector<std::uint64_t> city_thresholds = kCityThresholds;
  int top_n = 15;
};

/// Writes one CSV per report plus manifest.json into `dir`; returns the
/// file names written (manifest last).
std::vector<std::string> write_stats_reports(const CorpusSummary& summary,
                                             const std::filesystem::path& dir,
                                             const StatsReportOptions& options = {});

std::string csv_field(const std::string& value);

}  // namespace geocov
