// SPDX-License-Identifier: Apache-2.0
//
// Fuses the four per-tweet location sources into a GeoRecord. Consumers
// should trust the slots in the order geo > place > user_location >
// tweet_locations: device GPS first, the platform place tag second, and the
// two text-derived slots after that.

#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geocov/gazetteer.hpp"
#include "geocov/geocoder.hpp"
#include "geocov/place.hpp"
#include "geocov/toponym.hpp"
#include "geocov/tweet.hpp"

namespace geocov {

inline constexpr int kGeoRecordSchemaVersion = 1;

struct MentionedToponym {
  std::string phrase;
  std::string country_code;

  friend bool operator==(const MentionedToponym&, const MentionedToponym&) = default;
};

struct GeoRecord {
  std::uint64_t tweet_id = 0;
  std::uint64_t user_id = 0;
  std::optional<Timestamp> created_at;
  std::optional<ResolvedPlace> geo;
  std::optional<ResolvedPlace> place;
  std::optional<ResolvedPlace> user_location;
  std::optional<ResolvedPlace> tweet_locations;
  std::vector<MentionedToponym> mentioned_toponyms;

  friend bool operator==(const GeoRecord&, const GeoRecord&) = default;
};

enum class Source { kGeo, kPlace, kUserLocation, kTweetLocations };
inline constexpr Source kSourcesByTrust[] = {Source::kGeo, Source::kPlace, Source::kUserLocation,
                                             Source::kTweetLocations};
const char* source_name(Source source);
const std::optional<ResolvedPlace>& slot(const GeoRecord& record, Source source);

/// One toponym phrase and its search results (best first).
struct VoteEntry {
  std::string phrase;
  std::size_t position = 0;
  std::vector<ResolvedPlace> results;
};

/// Each entry votes with its top result's country_code. The winning country
/// is the most frequent; ties go to the country whose best candidate has the
/// higher importance, then the earlier position. Within the winning country
/// the candidate with the highest importance (then earliest position) is
/// returned. Candidates without a country_code only matter when no candidate
/// has one.
std::optional<ResolvedPlace> majority_vote(const std::vector<VoteEntry>& entries);

struct ResolveOptions {
  PreprocessOptions preprocess;
  bool majority_vote = true;  // false: leave tweet_locations/user_location unset, list candidates
  bool dedup_phrases = true;  // each distinct phrase votes once
};

struct TextResolution {
  std::optional<ResolvedPlace> place;
  std::vector<MentionedToponym> mentioned;
  std::uint64_t failures = 0;
};

struct SlotCounters {
  std::uint64_t present = 0;    // the tweet carried this source
  std::uint64_t resolved = 0;   // slot filled
  std::uint64_t not_found = 0;  // source present, nothing resolvable
  std::uint64_t failed = 0;     // geocoder failures touching this slot
};

struct ResolveCounters {
  std::uint64_t tweets = 0;
  SlotCounters geo, place, user_location, tweet_locations;
};

class Resolver {
 public:
  Resolver(const GazetteerIndex& index, const StopWords& stopwords, Geocoder& geocoder,
           ResolveOptions options = {});

  std::optional<ResolvedPlace> resolve_gps(const RawTweet& tweet);
  std::optional<ResolvedPlace> resolve_place_field(const RawTweet& tweet);
  TextResolution resolve_text_source(std::string_view text);
  GeoRecord resolve_tweet(const RawTweet& tweet);

  ResolveCounters counters() const;
  Geocoder& geocoder() { return geocoder_; }

 private:
  struct AtomicSlot {
    std::atomic<std::uint64_t> present{0}, resolved{0}, not_found{0}, failed{0};
    SlotCounters load() const;
  };
  void count(AtomicSlot& slot, bool present, bool resolved, std::uint64_t failures);

  const GazetteerIndex& index_;
  const StopWords& stopwords_;
  Geocoder& geocoder_;
  ResolveOptions options_;
  std::atomic<std::uint64_t> tweets_{0};
  AtomicSlot geo_, place_, user_location_, tweet_locations_;
};

/// Shortest round-trip decimal form: plain notation for decimal exponents
/// in [-4, 16), scientific otherwise; integral values keep a ".0".
std::string format_double(double value);

/// One GeoRecord as a JSON line (no newline). Field order is fixed; absent
/// slots are omitted; ids are decimal strings.
std::string to_json_line(const GeoRecord& record);
std::optional<GeoRecord> parse_geo_record(std::string_view line);

/// Writes newline-delimited records; throws std::runtime_error on failure.
void write_records(const std::vector<GeoRecord>& records, std::ostream& sink);
std::vector<GeoRecord> read_records(std::istream& source);

}  // namespace geocov
