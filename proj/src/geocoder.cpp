// SPDX-License-Identifier: Apache-2.0

#include "geocov/geocoder.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "geocov/gazetteer.hpp"
#include "geocov/log.hpp"

namespace geocov {
namespace {

std::optional<double> number_field(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (it->is_number()) return it->get<double>();
  if (it->is_string()) {
    const auto& s = it->get_ref<const std::string&>();
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  }
  return std::nullopt;
}

std::optional<ResolvedPlace> map_result(const nlohmann::json& item) {
  if (!item.is_object()) return std::nullopt;
  const auto address = item.find("address");
  if (address == item.end()) return std::nullopt;
  auto place = map_address(*address);
  if (!place) return std::nullopt;
  const auto lat = number_field(item, "lat");
  const auto lon = number_field(item, "lon");
  if (lat && lon && valid_coordinates(*lat, *lon)) place->coordinates = Coordinates{*lat, *lon};
  if (const auto imp = number_field(item, "importance")) place->importance = *imp;
  return place;
}

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  const auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const auto slash = url.find('/', host_start);
  if (slash == std::string::npos) return {url, ""};
  std::string prefix = url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, slash), prefix};
}

bool retryable(int status) { return status == 0 || status == 429 || status >= 500; }

std::optional<std::chrono::milliseconds> retry_after(const HttpResponse& r) {
  const auto it = r.headers.find("retry-after");
  if (it == r.headers.end()) return std::nullopt;
  int seconds = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seconds);
  if (ec != std::errc() || seconds < 0) return std::nullopt;
  return std::chrono::seconds(seconds);
}

}  // namespace

std::optional<std::vector<ResolvedPlace>> parse_search_body(const std::string& body) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (!j.is_array()) return std::nullopt;
  std::vector<ResolvedPlace> places;
  for (const auto& item : j)
    if (auto p = map_result(item)) places.push_back(std::move(*p));
  return places;
}

std::optional<std::optional<ResolvedPlace>> parse_reverse_body(const std::string& body) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (!j.is_object()) return std::nullopt;
  if (j.contains("error")) return std::optional<ResolvedPlace>{};
  return map_result(j);
}

Geocoder::Geocoder(GeocoderOptions options, std::shared_ptr<Transport> transport,
                   std::shared_ptr<GeocodeCache> cache, std::shared_ptr<TimeSource> time)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      cache_(cache ? std::move(cache) : std::make_shared<GeocodeCache>()),
      time_(std::move(time)),
      in_flight_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, options_.max_in_flight))) {
  for (const auto& e : options_.endpoints) {
    limiters_.push_back(std::make_unique<RateLimiter>(e.limit, time_));
    origins_.push_back(split_url(e.url));
  }
}

GeocoderStats Geocoder::stats() const {
  return {network_requests_.load(), cache_hits_.load(), retries_.load(), failures_.load()};
}

void Geocoder::mark_failed(const std::string& key) {
  ++failures_;
  std::unique_lock lock(memo_mu_);
  failed_.insert(key);
}

bool Geocoder::known_failed(const std::string& key) const {
  std::shared_lock lock(memo_mu_);
  return failed_.count(key) != 0;
}

HttpRequest Geocoder::build_request(const GeocodeCacheKey& key, std::size_t endpoint) const {
  HttpRequest req;
  req.base_url = origins_[endpoint].first;
  req.headers = {{"User-Agent", options_.user_agent},
                 {"Accept-Language", options_.accept_language}};
  if (key.kind == QueryKind::kSearch) {
    req.path = origins_[endpoint].second + "/search";
    req.params = {{"q", key.payload},
                  {"format", "jsonv2"},
                  {"addressdetails", "1"},
                  {"limit", std::to_string(options_.search_limit)},
                  {"accept-language", options_.accept_language}};
  } else {
    const auto comma = key.payload.find(',');
    req.path = origins_[endpoint].second + "/reverse";
    req.params = {{"lat", key.payload.substr(0, comma)},
                  {"lon", key.payload.substr(comma + 1)},
                  {"format", "jsonv2"},
                  {"addressdetails", "1"},
                  {"zoom", std::to_string(options_.reverse_zoom)},
                  {"accept-language", options_.accept_language}};
  }
  return req;
}

Geocoder::Fetched Geocoder::fetch(const GeocodeCacheKey& key) {
  if (limiters_.empty()) return {};
  for (std::size_t attempt = 0;; ++attempt) {
    const auto endpoint = next_endpoint_.fetch_add(1) % limiters_.size();
    const auto request = build_request(key, endpoint);
    HttpResponse response;
    {
      in_flight_.acquire();
      limiters_[endpoint]->acquire();
      ++network_requests_;
      try {
        response = transport_->get(request);
      } catch (...) {
        in_flight_.release();
        throw;
      }
      in_flight_.release();
    }
    if (response.status == 200) return {true, std::move(response.body)};
    if (!retryable(response.status) || attempt >= options_.backoff.size()) {
      log::warn("geocode request failed",
                {{"key", key.str()}, {"status", response.status}, {"error", response.error},
                 {"attempts", attempt + 1}});
      return {};
    }
    ++retries_;
    auto delay = options_.backoff[attempt];
    if (response.status == 429)
      if (const auto hinted = retry_after(response)) delay = std::max(delay, *hinted);
    time_->sleep_for(delay);
  }
}

std::optional<std::string> Geocoder::body_for(const GeocodeCacheKey& key) {
  const auto k = key.str();
  if (auto cached = cache_->get(k)) {
    ++cache_hits_;
    return cached;
  }
  if (known_failed(k)) return std::nullopt;

  std::shared_future<Fetched> shared;
  std::promise<Fetched> promise;
  bool owner = false;
  {
    std::lock_guard lock(pending_mu_);
    if (auto it = pending_.find(k); it != pending_.end()) {
      shared = it->second;
    } else {
      // Re-check under the lock: another caller may have just finished.
      if (auto cached = cache_->get(k)) {
        ++cache_hits_;
        return cached;
      }
      shared = promise.get_future().share();
      pending_.emplace(k, shared);
      owner = true;
    }
  }
  if (owner) {
    Fetched fetched;
    try {
      fetched = fetch(key);
    } catch (...) {
      fetched = {};
    }
    if (fetched.ok) {
      const bool well_formed = key.kind == QueryKind::kSearch
                                   ? parse_search_body(fetched.body).has_value()
                                   : parse_reverse_body(fetched.body).has_value();
      if (well_formed) {
        cache_->put(k, fetched.body);
      } else {
        log::warn("malformed geocoder response", {{"key", k}});
        fetched = {};
      }
    }
    promise.set_value(fetched);
    {
      std::lock_guard lock(pending_mu_);
      pending_.erase(k);
    }
  }
  const auto& fetched = shared.get();
  if (!fetched.ok) {
    if (owner) mark_failed(k);
    return std::nullopt;
  }
  return fetched.body;
}

SearchResult Geocoder::search(const std::string& query) {
  const auto normalized = normalize(query);
  if (normalized.empty()) throw std::invalid_argument("search query must be non-empty");
  const auto key = GeocodeCacheKey::search(normalized);
  const auto k = key.str();
  {
    std::shared_lock lock(memo_mu_);
    if (const auto it = search_memo_.find(k); it != search_memo_.end()) {
      ++cache_hits_;
      return it->second;
    }
  }
  const auto body = body_for(key);
  if (!body) return {GeocodeStatus::kFailed, {}};
  auto places = parse_search_body(*body);
  if (!places) {
    log::warn("malformed search response", {{"key", k}});
    mark_failed(k);
    return {GeocodeStatus::kFailed, {}};
  }
  SearchResult result{places->empty() ? GeocodeStatus::kNotFound : GeocodeStatus::kOk,
                      std::move(*places)};
  std::unique_lock lock(memo_mu_);
  search_memo_.emplace(k, result);
  return result;
}

ReverseResult Geocoder::reverse(double latitude, double longitude) {
  if (!valid_coordinates(latitude, longitude))
    throw std::invalid_argument("reverse geocoding coordinates out of range");
  const auto key = GeocodeCacheKey::reverse(latitude, longitude);
  const auto k = key.str();
  {
    std::shared_lock lock(memo_mu_);
    if (const auto it = reverse_memo_.find(k); it != reverse_memo_.end()) {
      ++cache_hits_;
      return it->second;
    }
  }
  const auto body = body_for(key);
  if (!body) return {GeocodeStatus::kFailed, std::nullopt};
  auto parsed = parse_reverse_body(*body);
  if (!parsed) {
    log::warn("malformed reverse response", {{"key", k}});
    mark_failed(k);
    return {GeocodeStatus::kFailed, std::nullopt};
  }
  ReverseResult result{*parsed ? GeocodeStatus::kOk : GeocodeStatus::kNotFound, *parsed};
  std::unique_lock lock(memo_mu_);
  reverse_memo_.emplace(k, result);
  return result;
}

RecordedTransport::RecordedTransport(const std::filesystem::path& fixtures) {
  std::ifstream in(fixtures);
  if (!in) throw std::runtime_error("cannot read geocoder fixtures: " + fixtures.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_object() || !j.contains("key") || !j.contains("body"))
      throw std::runtime_error("bad fixture line " + std::to_string(line_no) + " in " +
                               fixtures.string());
    HttpResponse r;
    r.status = j.value("status", 200);
    r.body = j["body"].get<std::string>();
    responses_[j["key"].get<std::string>()] = std::move(r);
  }
}

std::string RecordedTransport::key_for(const HttpRequest& request) {
  const auto& p = request.path;
  if (p.size() >= 7 && p.compare(p.size() - 7, 7, "/search") == 0)
    return "search|" + request.param("q");
  if (p.size() >= 8 && p.compare(p.size() - 8, 8, "/reverse") == 0)
    return "reverse|" + request.param("lat") + "," + request.param("lon");
  return {};
}

HttpResponse RecordedTransport::get(const HttpRequest& request) {
  ++requests_;
  const auto key = key_for(request);
  if (const auto it = responses_.find(key); it != responses_.end()) return it->second;
  HttpResponse r;
  r.status = 200;
  r.body = key.rfind("reverse|", 0) == 0 ? R"({"error":"Unable to geocode"})" : "[]";
  return r;
}

std::vector<std::pair<std::string, std::string>> RecordedTransport::successful() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, r] : responses_)
    if (r.status == 200) out.emplace_back(k, r.body);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace geocov
