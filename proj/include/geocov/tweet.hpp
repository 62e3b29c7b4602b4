// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace geocov {

using Timestamp = std::chrono::sys_seconds;

struct Coordinates {
  double latitude = 0.0;
  double longitude = 0.0;

  friend bool operator==(const Coordinates&, const Coordinates&) = default;
};

bool valid_coordinates(double latitude, double longitude);

/// The subset of a tweet record that feeds location inference.
struct RawTweet {
  std::uint64_t tweet_id = 0;
  std::uint64_t user_id = 0;
  std::optional<Timestamp> created_at;
  std::string text;
  std::optional<std::string> user_location;
  std::optional<std::string> place_full_name;
  std::optional<std::string> place_country_code;  // lowercase ISO-3166 alpha-2
  std::optional<Coordinates> coordinates;         // precise GPS only
  std::optional<std::string> language;
  bool user_verified = false;

  friend bool operator==(const RawTweet&, const RawTweet&) = default;
};

/// Parses one line of platform JSON (v1.1 layout). Returns nullopt on
/// invalid JSON, missing/zero ids, or an empty body.
std::optional<RawTweet> parse_tweet(std::string_view line);

/// Compact JSON using this library's own field names; parse_debug_form
/// inverts it exactly.
std::string to_debug_form(const RawTweet& tweet);
std::optional<RawTweet> parse_debug_form(std::string_view line);

/// "Wed Oct 10 20:19:24 +0000 2018" (platform form) or ISO-8601
/// "2018-10-10T20:19:24Z".
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);  // ISO-8601, UTC, second precision
std::string format_date(Timestamp ts);       // YYYY-MM-DD (UTC)

}  // namespace geocov
