// SPDX-License-Identifier: Apache-2.0

#include "geocov/stats.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace geocov {
namespace {

void merge_counts(CorpusSummary::Counts& into, const CorpusSummary::Counts& from) {
  for (const auto& [k, v] : from) into[k] += v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string counts_csv(const char* key_header, const CorpusSummary::Counts& counts,
                       bool by_volume) {
  std::vector<std::pair<std::string, std::uint64_t>> rows(counts.begin(), counts.end());
  if (by_volume)
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
  std::string out = std::string(key_header) + ",tweets\n";
  for (const auto& [k, v] : rows) out += csv_field(k) + "," + std::to_string(v) + "\n";
  return out;
}

std::string buckets_csv(const char* entity, const std::vector<BucketRow>& rows) {
  std::string out = std::string("bucket,threshold,") + entity + "\n";
  for (const auto& r : rows)
    out += r.label + "," + std::to_string(r.threshold) + "," + std::to_string(r.entities) + "\n";
  return out;
}

}  // namespace

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (const char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string city_key(const ResolvedPlace& place) {
  if (place.country_code.empty()) return place.city;
  return place.city + ", " + place.country_code;
}

CorpusSummary::CorpusSummary(std::vector<Source> priority) : priority_(std::move(priority)) {}

void CorpusSummary::add(const RawTweet& tweet, const GeoRecord* record) {
  ++total_;
  const std::string date = tweet.created_at ? format_date(*tweet.created_at) : kUnknownDate;
  ++daily_[date];
  const std::string lang =
      tweet.language && !tweet.language->empty() ? *tweet.language : kUndeterminedLanguage;
  ++languages_[lang];
  ++language_series_[lang][date];

  std::uint8_t flags = 0;
  if (tweet.user_verified) flags |= kVerified;
  if (tweet.coordinates) flags |= kGeo;
  if (tweet.place_full_name || tweet.place_country_code) flags |= kPlace;

  if (record) {
    for (std::size_t i = 0; i < 4; ++i)
      if (slot(*record, kSourcesByTrust[i])) ++sources_[i];
    if (record->user_location) flags |= kLocation;
    for (const auto source : priority_) {
      const auto& place = slot(*record, source);
      if (!place) continue;
      if (!place->country_code.empty()) {
        ++countries_[place->country_code];
        ++country_series_[place->country_code][date];
      }
      if (!place->city.empty()) {
        const auto key = city_key(*place);
        ++cities_[key];
        ++city_series_[key][date];
      }
      break;
    }
  }
  users_[tweet.user_id] |= flags;
}

void CorpusSummary::merge(const CorpusSummary& other) {
  total_ += other.total_;
  merge_counts(daily_, other.daily_);
  merge_counts(languages_, other.languages_);
  merge_counts(countries_, other.countries_);
  merge_counts(cities_, other.cities_);
  for (std::size_t i = 0; i < sources_.size(); ++i) sources_[i] += other.sources_[i];
  for (const auto& [k, v] : other.country_series_) merge_counts(country_series_[k], v);
  for (const auto& [k, v] : other.city_series_) merge_counts(city_series_[k], v);
  for (const auto& [k, v] : other.language_series_) merge_counts(language_series_[k], v);
  for (const auto& [id, f] : other.users_) users_[id] |= f;
}

const CorpusSummary::Series& CorpusSummary::series(SeriesKey key) const {
  switch (key) {
    case SeriesKey::kCountry: return country_series_;
    case SeriesKey::kCity: return city_series_;
    case SeriesKey::kLanguage: return language_series_;
  }
  return country_series_;
}

UserCounts CorpusSummary::all_users() const {
  UserCounts c;
  for (const auto& [id, f] : users_) {
    ++c.users;
    c.with_geo += (f & kGeo) != 0;
    c.with_place += (f & kPlace) != 0;
    c.with_location_value += (f & kLocation) != 0;
  }
  return c;
}

UserCounts CorpusSummary::verified_users() const {
  UserCounts c;
  for (const auto& [id, f] : users_) {
    if (!(f & kVerified)) continue;
    ++c.users;
    c.with_geo += (f & kGeo) != 0;
    c.with_place += (f & kPlace) != 0;
    c.with_location_value += (f & kLocation) != 0;
  }
  return c;
}

std::string threshold_label(std::uint64_t t) {
  if (t >= 1'000'000 && t % 1'000'000 == 0) return ">" + std::to_string(t / 1'000'000) + "M";
  if (t >= 1'000 && t % 1'000 == 0) return ">" + std::to_string(t / 1'000) + "K";
  return ">" + std::to_string(t);
}

std::vector<BucketRow> bucket_table(const std::map<std::string, std::uint64_t>& counts,
                                    const std::vector<std::uint64_t>& thresholds) {
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (thresholds[i] >= thresholds[i - 1])
      throw std::invalid_argument("bucket thresholds must be strictly descending");
  std::vector<BucketRow> rows;
  for (const auto t : thresholds) {
    const auto n = std::count_if(counts.begin(), counts.end(),
                                 [t](const auto& kv) { return kv.second > t; });
    rows.push_back({t, threshold_label(t), static_cast<std::uint64_t>(n)});
  }
  return rows;
}

std::vector<std::string> top_keys(const CorpusSummary& summary, SeriesKey key, int n) {
  if (n <= 0) throw std::invalid_argument("top-n requires n > 0");
  std::vector<std::pair<std::string, std::uint64_t>> totals;
  for (const auto& [k, days] : summary.series(key)) {
    std::uint64_t sum = 0;
    for (const auto& [d, c] : days) sum += c;
    totals.emplace_back(k, sum);
  }
  std::sort(totals.begin(), totals.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (totals.size() > static_cast<std::size_t>(n)) totals.resize(static_cast<std::size_t>(n));
  std::vector<std::string> keys;
  for (auto& [k, v] : totals) keys.push_back(std::move(k));
  return keys;
}

std::string top_n_series(const CorpusSummary& summary, SeriesKey key, int n) {
  const auto keys = top_keys(summary, key, n);
  const auto& series = summary.series(key);
  std::set<std::string> dates;
  for (const auto& [d, c] : summary.daily_counts()) dates.insert(d);

  std::string out = "date";
  for (const auto& k : keys) out += "," + csv_field(k);
  out += "\n";
  for (const auto& d : dates) {
    out += d;
    for (const auto& k : keys) {
      const auto& days = series.at(k);
      const auto it = days.find(d);
      out += "," + std::to_string(it == days.end() ? 0 : it->second);
    }
    out += "\n";
  }
  return out;
}

std::vector<std::string> write_stats_reports(const CorpusSummary& s,
                                             const std::filesystem::path& dir,
                                             const StatsReportOptions& options) {
  std::filesystem::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> files;

  files.emplace_back("daily_counts.csv", counts_csv("date", s.daily_counts(), false));
  files.emplace_back("languages.csv", counts_csv("language", s.language_counts(), true));
  files.emplace_back("countries.csv", counts_csv("country_code", s.country_counts(), true));
  files.emplace_back("cities.csv", counts_csv("city", s.city_counts(), true));
  files.emplace_back("country_buckets.csv",
                     buckets_csv("countries", bucket_table(s.country_counts(),
                                                           options.country_thresholds)));
  files.emplace_back("city_buckets.csv",
                     buckets_csv("cities", bucket_table(s.city_counts(), options.city_thresholds)));

  std::string sources = "source,tweets\n";
  for (std::size_t i = 0; i < 4; ++i)
    sources += std::string(source_name(kSourcesByTrust[i])) + "," +
               std::to_string(s.source_counts()[i]) + "\n";
  files.emplace_back("sources.csv", sources);

  const auto all = s.all_users();
  const auto verified = s.verified_users();
  std::string users = "metric,all_users,verified_users\n";
  users += "unique_users," + std::to_string(all.users) + "," + std::to_string(verified.users) + "\n";
  users += "users_with_geo," + std::to_string(all.with_geo) + "," +
           std::to_string(verified.with_geo) + "\n";
  users += "users_with_place," + std::to_string(all.with_place) + "," +
           std::to_string(verified.with_place) + "\n";
  users += "users_with_location_value," + std::to_string(all.with_location_value) + "," +
           std::to_string(verified.with_location_value) + "\n";
  files.emplace_back("users.csv", users);

  files.emplace_back("top_countries_daily.csv",
                     top_n_series(s, SeriesKey::kCountry, options.top_n));
  files.emplace_back("top_cities_daily.csv", top_n_series(s, SeriesKey::kCity, options.top_n));
  files.emplace_back("top_languages_daily.csv",
                     top_n_series(s, SeriesKey::kLanguage, options.top_n));

  nlohmann::ordered_json manifest;
  manifest["total_tweets"] = s.total_tweets();
  auto& list = manifest["files"] = nlohmann::ordered_json::array();
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    write_file(dir / name, content);
    list.push_back(name);
    names.push_back(name);
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  names.push_back("manifest.json");
  return names;
}

}  // namespace geocov
