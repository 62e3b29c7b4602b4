// SPDX-License-Identifier: Apache-2.0

#include "geocov/resolve.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace geocov {
namespace {

// Non-GPS slots carry names only.
ResolvedPlace names_only(ResolvedPlace p) {
  p.coordinates.reset();
  p.importance.reset();
  return p;
}

struct Best {
  const ResolvedPlace* place = nullptr;
  double importance = 0.0;
  std::size_t position = 0;
  std::size_t votes = 0;
};

bool better(double imp_a, std::size_t pos_a, double imp_b, std::size_t pos_b) {
  if (imp_a != imp_b) return imp_a > imp_b;
  return pos_a < pos_b;
}

std::optional<std::uint64_t> parse_u64(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (!j.is_string()) return std::nullopt;
  const auto& s = j.get_ref<const std::string&>();
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

const char* source_name(Source source) {
  switch (source) {
    case Source::kGeo: return "geo";
    case Source::kPlace: return "place";
    case Source::kUserLocation: return "user_location";
    case Source::kTweetLocations: return "tweet_locations";
  }
  return "?";
}

const std::optional<ResolvedPlace>& slot(const GeoRecord& r, Source source) {
  switch (source) {
    case Source::kGeo: return r.geo;
    case Source::kPlace: return r.place;
    case Source::kUserLocation: return r.user_location;
    case Source::kTweetLocations: return r.tweet_locations;
  }
  return r.geo;
}

std::optional<ResolvedPlace> majority_vote(const std::vector<VoteEntry>& entries) {
  std::map<std::string, Best> by_country;
  Best overall;
  for (const auto& e : entries) {
    if (e.results.empty()) continue;
    const auto& top = e.results.front();
    const double imp = top.importance.value_or(0.0);
    if (!overall.place || better(imp, e.position, overall.importance, overall.position))
      overall = {&top, imp, e.position, 0};
    if (top.country_code.empty()) continue;
    auto& b = by_country[top.country_code];
    ++b.votes;
    if (!b.place || better(imp, e.position, b.importance, b.position)) {
      b.place = &top;
      b.importance = imp;
      b.position = e.position;
    }
  }
  if (!overall.place) return std::nullopt;
  if (by_country.empty()) return *overall.place;

  const Best* winner = nullptr;
  for (const auto& [cc, b] : by_country) {
    if (!winner || b.votes > winner->votes ||
        (b.votes == winner->votes &&
         better(b.importance, b.position, winner->importance, winner->position)))
      winner = &b;
  }
  return *winner->place;
}

SlotCounters Resolver::AtomicSlot::load() const {
  return {present.load(), resolved.load(), not_found.load(), failed.load()};
}

Resolver::Resolver(const GazetteerIndex& index, const StopWords& stopwords, Geocoder& geocoder,
                   ResolveOptions options)
    : index_(index), stopwords_(stopwords), geocoder_(geocoder), options_(options) {}

void Resolver::count(AtomicSlot& slot, bool present, bool resolved, std::uint64_t failures) {
  if (!present) return;
  ++slot.present;
  if (resolved) {
    ++slot.resolved;
  } else if (failures == 0) {
    ++slot.not_found;
  }
  slot.failed += failures;
}

ResolveCounters Resolver::counters() const {
  return {tweets_.load(), geo_.load(), place_.load(), user_location_.load(),
          tweet_locations_.load()};
}

std::optional<ResolvedPlace> Resolver::resolve_gps(const RawTweet& tweet) {
  if (!tweet.coordinates) return std::nullopt;
  const auto result = geocoder_.reverse(tweet.coordinates->latitude, tweet.coordinates->longitude);
  count(geo_, true, result.place.has_value(), result.status == GeocodeStatus::kFailed ? 1 : 0);
  if (!result.place) return std::nullopt;
  auto place = *result.place;
  place.importance.reset();
  place.coordinates = tweet.coordinates;
  return place;
}

std::optional<ResolvedPlace> Resolver::resolve_place_field(const RawTweet& tweet) {
  const bool has_name = tweet.place_full_name && !normalize(*tweet.place_full_name).empty();
  if (!has_name && !tweet.place_country_code) return std::nullopt;
  std::optional<ResolvedPlace> out;
  std::uint64_t failures = 0;
  GeocodeStatus status = GeocodeStatus::kNotFound;
  if (has_name) {
    auto result = geocoder_.search(*tweet.place_full_name);
    status = result.status;
    if (status == GeocodeStatus::kFailed) failures = 1;
    if (!result.places.empty()) out = names_only(std::move(result.places.front()));
  }
  if (!out && status == GeocodeStatus::kNotFound && tweet.place_country_code) {
    ResolvedPlace fallback;
    fallback.country_code = *tweet.place_country_code;
    out = fallback;
  }
  count(place_, true, out.has_value(), failures);
  return out;
}

TextResolution Resolver::resolve_text_source(std::string_view text) {
  TextResolution out;
  auto candidates = extract_toponyms(text, index_, stopwords_, options_.preprocess);
  if (options_.dedup_phrases) {
    std::unordered_set<std::string> seen;
    std::erase_if(candidates,
                  [&](const ToponymCandidate& c) { return !seen.insert(c.phrase).second; });
  }
  std::vector<VoteEntry> entries;
  for (auto& c : candidates) {
    auto result = geocoder_.search(c.phrase);
    if (result.status == GeocodeStatus::kFailed) {
      ++out.failures;
      continue;
    }
    if (result.places.empty()) continue;
    out.mentioned.push_back({c.phrase, result.places.front().country_code});
    entries.push_back({std::move(c.phrase), c.position, std::move(result.places)});
  }
  if (options_.majority_vote) {
    if (auto winner = majority_vote(entries)) out.place = names_only(std::move(*winner));
  }
  return out;
}

GeoRecord Resolver::resolve_tweet(const RawTweet& tweet) {
  ++tweets_;
  GeoRecord r;
  r.tweet_id = tweet.tweet_id;
  r.user_id = tweet.user_id;
  r.created_at = tweet.created_at;
  r.geo = resolve_gps(tweet);
  r.place = resolve_place_field(tweet);
  if (tweet.user_location) {
    auto user = resolve_text_source(*tweet.user_location);
    count(user_location_, true, user.place.has_value(), user.failures);
    r.user_location = std::move(user.place);
  }
  auto content = resolve_text_source(tweet.text);
  count(tweet_locations_, true, content.place.has_value(), content.failures);
  r.tweet_locations = std::move(content.place);
  r.mentioned_toponyms = std::move(content.mentioned);
  return r;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  // Shortest round-trip digits, laid out like the common "repr" convention:
  // plain notation for exponents in [-4, 16), otherwise d.ddde+XX.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  const std::string_view sci(buf, static_cast<std::size_t>(res.ptr - buf));
  const auto e_pos = sci.find('e');
  std::string_view mantissa = sci.substr(0, e_pos);
  const int exponent = std::stoi(std::string(sci.substr(e_pos + 1)));
  std::string sign;
  if (!mantissa.empty() && mantissa.front() == '-') {
    sign = "-";
    mantissa.remove_prefix(1);
  }
  std::string digits;
  for (const char c : mantissa)
    if (c != '.') digits += c;

  if (exponent < -4 || exponent >= 16) {
    std::string out = sign + digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    char exp[16];
    std::snprintf(exp, sizeof exp, "e%c%02d", exponent < 0 ? '-' : '+', std::abs(exponent));
    return out + exp;
  }
  if (exponent < 0) return sign + "0." + std::string(static_cast<std::size_t>(-exponent - 1), '0') + digits;
  const auto int_len = static_cast<std::size_t>(exponent) + 1;
  if (digits.size() <= int_len)
    return sign + digits + std::string(int_len - digits.size(), '0') + ".0";
  return sign + digits.substr(0, int_len) + "." + digits.substr(int_len);
}

namespace {

void append_string(std::string& out, const std::string& s) {
  out += nlohmann::json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void append_place(std::string& out, const ResolvedPlace& p, bool with_coordinates) {
  out += '{';
  bool first = true;
  const auto field = [&](const char* name, const std::string& value) {
    if (value.empty()) return;
    if (!first) out += ',';
    first = false;
    out += '"';
    out += name;
    out += "\":";
    append_string(out, value);
  };
  field("country_code", p.country_code);
  field("country", p.country);
  field("state", p.state);
  field("county", p.county);
  field("city", p.city);
  if (with_coordinates && p.coordinates) {
    if (!first) out += ',';
    out += "\"lat\":" + format_double(p.coordinates->latitude);
    out += ",\"lon\":" + format_double(p.coordinates->longitude);
  }
  out += '}';
}

}  // namespace

// Hand-rolled so that coordinates use the shortest round-trip spelling.
std::string to_json_line(const GeoRecord& r) {
  std::string out = "{\"tweet_id\":\"" + std::to_string(r.tweet_id) + "\",\"user_id\":\"" +
                    std::to_string(r.user_id) + '"';
  if (r.created_at) out += ",\"created_at\":\"" + format_timestamp(*r.created_at) + '"';
  for (const auto source : kSourcesByTrust) {
    if (const auto& p = slot(r, source)) {
      out += ",\"";
      out += source_name(source);
      out += "\":";
      append_place(out, *p, source == Source::kGeo);
    }
  }
  if (!r.mentioned_toponyms.empty()) {
    out += ",\"mentioned_toponyms\":[";
    for (std::size_t i = 0; i < r.mentioned_toponyms.size(); ++i) {
      if (i) out += ',';
      out += '[';
      append_string(out, r.mentioned_toponyms[i].phrase);
      out += ',';
      append_string(out, r.mentioned_toponyms[i].country_code);
      out += ']';
    }
    out += ']';
  }
  out += '}';
  return out;
}

std::optional<GeoRecord> parse_geo_record(std::string_view line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (!j.is_object()) return std::nullopt;
  try {
    GeoRecord r;
    const auto tid = parse_u64(j.at("tweet_id"));
    const auto uid = parse_u64(j.at("user_id"));
    if (!tid || !uid) return std::nullopt;
    r.tweet_id = *tid;
    r.user_id = *uid;
    if (j.contains("created_at")) {
      r.created_at = parse_timestamp(j["created_at"].get<std::string>());
      if (!r.created_at) return std::nullopt;
    }
    if (j.contains("geo")) r.geo = place_from_json(j["geo"]);
    if (j.contains("place")) r.place = place_from_json(j["place"]);
    if (j.contains("user_location")) r.user_location = place_from_json(j["user_location"]);
    if (j.contains("tweet_locations")) r.tweet_locations = place_from_json(j["tweet_locations"]);
    if (j.contains("mentioned_toponyms"))
      for (const auto& m : j["mentioned_toponyms"])
        r.mentioned_toponyms.push_back({m.at(0).get<std::string>(), m.at(1).get<std::string>()});
    return r;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

void write_records(const std::vector<GeoRecord>& records, std::ostream& sink) {
  for (const auto& r : records) sink << to_json_line(r) << '\n';
  sink.flush();
  if (!sink) throw std::runtime_error("failed writing GeoRecords");
}

std::vector<GeoRecord> read_records(std::istream& source) {
  std::vector<GeoRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto r = parse_geo_record(line);
    if (!r) throw std::runtime_error("malformed GeoRecord at line " + std::to_string(line_no));
    out.push_back(std::move(*r));
  }
  return out;
}

}  // namespace geocov
