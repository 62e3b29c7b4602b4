// SPDX-License-Identifier: Apache-2.0
//
// JSON configuration shared by all subcommands. Sections and keys map 1:1
// onto command-line flags (see README); flags override file values.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "geocov/geocoder.hpp"
#include "geocov/hydrate.hpp"
#include "geocov/resolve.hpp"

namespace geocov {

/// Invalid or unreadable configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  struct {
    std::string csv;
    std::string snapshot;
  } gazetteer;

  struct {
    std::string stopwords;
    bool unwrap_hashtags = true;
  } toponym;

  struct {
    std::vector<Endpoint> endpoints;
    std::string cache;
    std::string fixtures;
    std::string user_agent = "geocov/1.0";
    std::string accept_language = "en";
    std::size_t max_in_flight = 64;
    std::vector<std::int64_t> backoff_ms = {1000, 4000, 16000};
    std::int64_t timeout_ms = 30000;
  } geocoder;

  struct {
    std::size_t workers = 0;
    bool majority_vote = true;
    bool dedup_phrases = true;
    bool preserve_order = true;
    std::string keywords;
  } resolve;

  struct {
    std::size_t n = 5000;
    std::uint64_t seed = 7;
  } eval;

  struct {
    std::vector<std::uint64_t> country_thresholds = {10'000'000, 1'000'000, 500'000, 100'000};
    std::vector<std::uint64_t> city_thresholds = {1'000'000, 500'000, 100'000, 50'000};
    int top_n = 15;
    std::vector<std::string> priority = {"geo", "place", "user_location", "tweet_locations"};
  } stats;

  struct {
    std::string base_url = "https://api.twitter.com";
    std::size_t batch_size = 100;
    std::size_t max_requests = 900;
    std::int64_t period_ms = 15 * 60 * 1000;
    std::size_t max_in_flight = 1;
  } hydrate;

  std::string log_level = "info";

  static Config load(const std::filesystem::path& path);

  GeocoderOptions geocoder_options() const;
  ResolveOptions resolve_options() const;
  HydrateOptions hydrate_options() const;
  std::vector<Source> stats_priority() const;
};

/// Parses an endpoint entry: {"url", "qps"} | {"url", "max_requests",
/// "period_ms"} | {"url", "preset": "public"}.
Endpoint parse_endpoint(const nlohmann::json& j);

}  // namespace geocov
