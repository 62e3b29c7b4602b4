// SPDX-License-Identifier: Apache-2.0

#include "geocov/tweet.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "geocov/unicode.hpp"
#include "json.hpp"

namespace geocov {
namespace {

using nlohmann::json;

std::optional<std::uint64_t> read_id(const json& obj, const char* num_key,
                                     const std::string& str_key) {
  if (const auto it = obj.find(str_key); it != obj.end() && it->is_string()) {
    const auto& s = it->get_ref<const std::string&>();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
    return std::nullopt;
  }
  if (const auto it = obj.find(num_key); it != obj.end()) {
    if (it->is_number_unsigned()) return it->get<std::uint64_t>();
    if (it->is_number_integer() && it->get<std::int64_t>() > 0)
      return static_cast<std::uint64_t>(it->get<std::int64_t>());
  }
  return std::nullopt;
}

std::optional<std::string> non_empty_string(const json& obj, const char* key) {
  if (const auto it = obj.find(key); it != obj.end() && it->is_string()) {
    const auto& s = it->get_ref<const std::string&>();
    if (s.find_first_not_of(unicode::kAsciiWhitespace) != std::string::npos) return s;
  }
  return std::nullopt;
}

std::optional<Coordinates> read_point(const json& obj, const char* key, bool lon_first) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_object()) return std::nullopt;
  const auto coords = it->find("coordinates");
  if (coords == it->end() || !coords->is_array() || coords->size() != 2) return std::nullopt;
  if (!(*coords)[0].is_number() || !(*coords)[1].is_number()) return std::nullopt;
  const double a = (*coords)[0].get<double>();
  const double b = (*coords)[1].get<double>();
  Coordinates c = lon_first ? Coordinates{b, a} : Coordinates{a, b};
  if (!valid_coordinates(c.latitude, c.longitude)) return std::nullopt;
  return c;
}

std::string lowercase_ascii(std::string s) {
  for (auto& ch : s)
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  return s;
}

int month_index(std::string_view m) {
  static constexpr std::array<std::string_view, 12> kMonths = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  for (std::size_t i = 0; i < kMonths.size(); ++i)
    if (kMonths[i] == m) return static_cast<int>(i) + 1;
  return 0;
}

std::optional<Timestamp> make_timestamp(int y, int mo, int d, int h, int mi, int s) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60)
    return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

}  // namespace

bool valid_coordinates(double latitude, double longitude) {
  return latitude >= -90.0 && latitude <= 90.0 && longitude >= -180.0 && longitude <= 180.0;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  const std::string buf(text);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tz_sign = 0;
  char wday[4] = {}, mon[4] = {};
  int tz = 0, consumed = 0;
  if (std::sscanf(buf.c_str(), "%3s %3s %d %d:%d:%d %c%4d %d%n", wday, mon, &d, &h, &mi, &s,
                  &tz_sign, &tz, &y, &consumed) == 9 &&
      consumed == static_cast<int>(buf.size())) {
    mo = month_index(mon);
    if (mo == 0 || tz != 0) return std::nullopt;
    return make_timestamp(y, mo, d, h, mi, s);
  }
  consumed = 0;
  if (std::sscanf(buf.c_str(), "%4d-%2d-%2dT%2d:%2d:%2dZ%n", &y, &mo, &d, &h, &mi, &s,
                  &consumed) == 6 &&
      consumed == static_cast<int>(buf.size())) {
    return make_timestamp(y, mo, d, h, mi, s);
  }
  return std::nullopt;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string format_date(Timestamp ts) { return format_timestamp(ts).substr(0, 10); }

std::optional<RawTweet> parse_tweet(std::string_view line) {
  const json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!doc.is_object()) return std::nullopt;
  const auto user = doc.find("user");
  if (user == doc.end() || !user->is_object()) return std::nullopt;

  RawTweet t;
  const auto tid = read_id(doc, "id", "id_str");
  const auto uid = read_id(*user, "id", "id_str");
  if (!tid || !uid || *tid == 0 || *uid == 0) return std::nullopt;
  t.tweet_id = *tid;
  t.user_id = *uid;

  // Extended text wins over the classic truncated body.
  std::optional<std::string> text;
  if (const auto ext = doc.find("extended_tweet"); ext != doc.end() && ext->is_object())
    text = non_empty_string(*ext, "full_text");
  if (!text) text = non_empty_string(doc, "full_text");
  if (!text) text = non_empty_string(doc, "text");
  if (!text) return std::nullopt;
  t.text = std::move(*text);

  if (const auto it = doc.find("created_at"); it != doc.end() && it->is_string())
    t.created_at = parse_timestamp(it->get_ref<const std::string&>());
  if (!t.created_at) {
    if (const auto it = doc.find("timestamp_ms"); it != doc.end()) {
      std::int64_t ms = -1;
      if (it->is_string()) {
        const auto& s = it->get_ref<const std::string&>();
        std::from_chars(s.data(), s.data() + s.size(), ms);
      } else if (it->is_number_integer()) {
        ms = it->get<std::int64_t>();
      }
      if (ms >= 0) t.created_at = Timestamp{std::chrono::seconds{ms / 1000}};
    }
  }

  t.user_location = non_empty_string(*user, "location");
  if (const auto v = user->find("verified"); v != user->end() && v->is_boolean())
    t.user_verified = v->get<bool>();

  if (const auto place = doc.find("place"); place != doc.end() && place->is_object()) {
    t.place_full_name = non_empty_string(*place, "full_name");
    if (auto cc = non_empty_string(*place, "country_code"); cc && cc->size() == 2)
      t.place_country_code = lowercase_ascii(std::move(*cc));
  }

  t.coordinates = read_point(doc, "coordinates", /*lon_first=*/true);
  if (!t.coordinates) t.coordinates = read_point(doc, "geo", /*lon_first=*/false);

  t.language = non_empty_string(doc, "lang");
  return t;
}

std::string to_debug_form(const RawTweet& t) {
  nlohmann::ordered_json j;
  j["tweet_id"] = t.tweet_id;
  j["user_id"] = t.user_id;
  if (t.created_at) j["created_at"] = format_timestamp(*t.created_at);
  j["text"] = t.text;
  if (t.user_location) j["user_location"] = *t.user_location;
  if (t.place_full_name) j["place_full_name"] = *t.place_full_name;
  if (t.place_country_code) j["place_country_code"] = *t.place_country_code;
  if (t.coordinates) j["coordinates"] = {t.coordinates->latitude, t.coordinates->longitude};
  if (t.language) j["language"] = *t.language;
  j["user_verified"] = t.user_verified;
  return j.dump();
}

std::optional<RawTweet> parse_debug_form(std::string_view line) {
  const json j = json::parse(line, nullptr, false);
  if (!j.is_object()) return std::nullopt;
  try {
    RawTweet t;
    t.tweet_id = j.at("tweet_id").get<std::uint64_t>();
    t.user_id = j.at("user_id").get<std::uint64_t>();
    if (j.contains("created_at")) {
      t.created_at = parse_timestamp(j["created_at"].get<std::string>());
      if (!t.created_at) return std::nullopt;
    }
    t.text = j.at("text").get<std::string>();
    if (j.contains("user_location")) t.user_location = j["user_location"].get<std::string>();
    if (j.contains("place_full_name")) t.place_full_name = j["place_full_name"].get<std::string>();
    if (j.contains("place_country_code"))
      t.place_country_code = j["place_country_code"].get<std::string>();
    if (j.contains("coordinates"))
      t.coordinates = Coordinates{j["coordinates"].at(0).get<double>(),
                                  j["coordinates"].at(1).get<double>()};
    if (j.contains("language")) t.language = j["language"].get<std::string>();
    t.user_verified = j.at("user_verified").get<bool>();
    return t;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

}  // namespace geocov
