// SPDX-License-Identifier: Apache-2.0

#include "geocov/config.hpp"

#include <fstream>
#include <set>

namespace geocov {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("config section '" + section + "' must be an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown config key '" + section + "." + k + "'");
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (const auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

}  // namespace

Endpoint parse_endpoint(const json& j) {
  Endpoint e;
  if (j.is_string()) {
    e.url = j.get<std::string>();
    return e;
  }
  check_keys(j, "geocoder.endpoints[]", {"url", "qps", "max_requests", "period_ms", "preset"});
  e.url = j.at("url").get<std::string>();
  if (j.contains("preset")) {
    if (j["preset"] != "public") throw ConfigError("unknown endpoint preset");
    e.limit = RateLimit::public_nominatim();
  } else if (j.contains("qps")) {
    e.limit = RateLimit::per_second(j["qps"].get<std::size_t>());
  } else if (j.contains("max_requests")) {
    e.limit.max_requests = j["max_requests"].get<std::size_t>();
    e.limit.period = std::chrono::milliseconds(j.value("period_ms", 1000));
  }
  if (e.limit.max_requests == 0) throw ConfigError("endpoint ceiling must be positive");
  return e;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  const auto j = json::parse(in, nullptr, false);
  if (!j.is_object()) throw ConfigError("config file is not a JSON object: " + path.string());
  check_keys(j, "", {"gazetteer", "toponym", "geocoder", "resolve", "eval", "stats", "hydrate",
                     "log_level"});
  Config c;
  try {
    if (j.contains("gazetteer")) {
      const auto& s = j["gazetteer"];
      check_keys(s, "gazetteer", {"csv", "snapshot"});
      read(s, "csv", c.gazetteer.csv);
      read(s, "snapshot", c.gazetteer.snapshot);
    }
    if (j.contains("toponym")) {
      const auto& s = j["toponym"];
      check_keys(s, "toponym", {"stopwords", "unwrap_hashtags"});
      read(s, "stopwords", c.toponym.stopwords);
      read(s, "unwrap_hashtags", c.toponym.unwrap_hashtags);
    }
    if (j.contains("geocoder")) {
      const auto& s = j["geocoder"];
      check_keys(s, "geocoder", {"endpoints", "cache", "fixtures", "user_agent", "accept_language",
                                 "max_in_flight", "backoff_ms", "timeout_ms"});
      if (s.contains("endpoints"))
        for (const auto& e : s["endpoints"]) c.geocoder.endpoints.push_back(parse_endpoint(e));
      read(s, "cache", c.geocoder.cache);
      read(s, "fixtures", c.geocoder.fixtures);
      read(s, "user_agent", c.geocoder.user_agent);
      read(s, "accept_language", c.geocoder.accept_language);
      read(s, "max_in_flight", c.geocoder.max_in_flight);
      read(s, "backoff_ms", c.geocoder.backoff_ms);
      read(s, "timeout_ms", c.geocoder.timeout_ms);
    }
    if (j.contains("resolve")) {
      const auto& s = j["resolve"];
      check_keys(s, "resolve",
                 {"workers", "majority_vote", "dedup_phrases", "preserve_order", "keywords"});
      read(s, "workers", c.resolve.workers);
      read(s, "majority_vote", c.resolve.majority_vote);
      read(s, "dedup_phrases", c.resolve.dedup_phrases);
      read(s, "preserve_order", c.resolve.preserve_order);
      read(s, "keywords", c.resolve.keywords);
    }
    if (j.contains("eval")) {
      const auto& s = j["eval"];
      check_keys(s, "eval", {"n", "seed"});
      read(s, "n", c.eval.n);
      read(s, "seed", c.eval.seed);
    }
    if (j.contains("stats")) {
      const auto& s = j["stats"];
      check_keys(s, "stats", {"country_thresholds", "city_thresholds", "top_n", "priority"});
      read(s, "country_thresholds", c.stats.country_thresholds);
      read(s, "city_thresholds", c.stats.city_thresholds);
      read(s, "top_n", c.stats.top_n);
      read(s, "priority", c.stats.priority);
    }
    if (j.contains("hydrate")) {
      const auto& s = j["hydrate"];
      check_keys(s, "hydrate",
                 {"base_url", "batch_size", "max_requests", "period_ms", "max_in_flight"});
      read(s, "base_url", c.hydrate.base_url);
      read(s, "batch_size", c.hydrate.batch_size);
      read(s, "max_requests", c.hydrate.max_requests);
      read(s, "period_ms", c.hydrate.period_ms);
      read(s, "max_in_flight", c.hydrate.max_in_flight);
    }
    read(j, "log_level", c.log_level);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
  return c;
}

GeocoderOptions Config::geocoder_options() const {
  GeocoderOptions o;
  o.endpoints = geocoder.endpoints;
  o.user_agent = geocoder.user_agent;
  o.accept_language = geocoder.accept_language;
  o.max_in_flight = geocoder.max_in_flight;
  o.backoff.clear();
  for (const auto ms : geocoder.backoff_ms) o.backoff.emplace_back(ms);
  return o;
}

ResolveOptions Config::resolve_options() const {
  ResolveOptions o;
  o.preprocess.unwrap_hashtags = toponym.unwrap_hashtags;
  o.majority_vote = resolve.majority_vote;
  o.dedup_phrases = resolve.dedup_phrases;
  return o;
}

HydrateOptions Config::hydrate_options() const {
  HydrateOptions o;
  o.base_url = hydrate.base_url;
  o.batch_size = hydrate.batch_size;
  o.max_in_flight = hydrate.max_in_flight;
  if (hydrate.max_requests == 0 || hydrate.period_ms <= 0)
    throw ConfigError("hydrate rate ceiling must be positive");
  o.limit = RateLimit{hydrate.max_requests, std::chrono::milliseconds(hydrate.period_ms)};
  return o;
}

std::vector<Source> Config::stats_priority() const {
  std::vector<Source> out;
  for (const auto& name : stats.priority) {
    bool found = false;
    for (const auto s : kSourcesByTrust) {
      if (name == source_name(s)) {
        out.push_back(s);
        found = true;
      }
    }
    if (!found) throw ConfigError("unknown source in stats.priority: " + name);
  }
  return out;
}

}  // namespace geocov
