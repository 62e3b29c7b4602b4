// SPDX-License-Identifier: Apache-2.0

#include "geocov/geocode_cache.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace geocov {

std::string format_coordinate(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  if (std::strcmp(buf, "-0.0000") == 0) return "0.0000";
  return buf;
}

GeocodeCacheKey GeocodeCacheKey::search(std::string_view normalized_query) {
  return {QueryKind::kSearch, std::string(normalized_query)};
}

GeocodeCacheKey GeocodeCacheKey::reverse(double latitude, double longitude) {
  return {QueryKind::kReverse, format_coordinate(latitude) + "," + format_coordinate(longitude)};
}

std::optional<GeocodeCacheKey> GeocodeCacheKey::parse(std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos) return std::nullopt;
  const auto kind = text.substr(0, bar);
  std::string payload(text.substr(bar + 1));
  if (kind == "search") return GeocodeCacheKey{QueryKind::kSearch, std::move(payload)};
  if (kind == "reverse") return GeocodeCacheKey{QueryKind::kReverse, std::move(payload)};
  return std::nullopt;
}

std::string GeocodeCacheKey::str() const {
  return (kind == QueryKind::kSearch ? "search|" : "reverse|") + payload;
}

GeocodeCache::GeocodeCache(const std::filesystem::path& path) : path_(path) {
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_);
    if (!in) throw std::runtime_error("cannot read geocode cache: " + path_.string());
    std::string line;
    while (std::getline(in, line)) {
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (!j.is_object() || !j.contains("k") || !j.contains("v") || !j["k"].is_string() ||
          !j["v"].is_string()) {
        ++lines_skipped_;
        continue;
      }
      map_[j["k"].get<std::string>()] = j["v"].get<std::string>();
      ++lines_loaded_;
    }
  } else if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  bool torn_tail = false;
  if (std::filesystem::exists(path_) && std::filesystem::file_size(path_) > 0) {
    std::ifstream tail(path_, std::ios::binary);
    tail.seekg(-1, std::ios::end);
    torn_tail = tail.get() != '\n';
  }
  out_ = std::fopen(path_.c_str(), "ab");
  if (!out_)
    throw std::runtime_error("cannot open geocode cache for append: " + path_.string() + ": " +
                             std::strerror(errno));
  if (torn_tail) std::fputc('\n', out_);
}

GeocodeCache::~GeocodeCache() {
  if (out_) std::fclose(out_);
}

std::optional<std::string> GeocodeCache::get(const std::string& key) const {
  std::shared_lock lock(mu_);
  const auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void GeocodeCache::put(const std::string& key, const std::string& body) {
  std::unique_lock lock(mu_);
  map_[key] = body;
  if (out_) {
    nlohmann::ordered_json j;
    j["k"] = key;
    j["v"] = body;
    const auto line = j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
    // One fwrite per entry: a crash leaves at most one torn trailing line.
    if (std::fwrite(line.data(), 1, line.size(), out_) != line.size() || std::fflush(out_) != 0)
      throw std::runtime_error("failed writing geocode cache: " + path_.string());
  }
}

std::size_t GeocodeCache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

std::unordered_map<std::string, std::string> GeocodeCache::entries() const {
  std::shared_lock lock(mu_);
  return map_;
}

void GeocodeCache::compact() {
  std::unique_lock lock(mu_);
  if (path_.empty()) return;
  std::vector<const std::pair<const std::string, std::string>*> sorted;
  sorted.reserve(map_.size());
  for (const auto& kv : map_) sorted.push_back(&kv);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->first < b->first; });

  auto tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    for (const auto* kv : sorted) {
      nlohmann::ordered_json j;
      j["k"] = kv->first;
      j["v"] = kv->second;
      out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  if (out_) std::fclose(out_);
  std::filesystem::rename(tmp, path_);
  out_ = std::fopen(path_.c_str(), "ab");
  if (!out_) throw std::runtime_error("cannot reopen geocode cache: " + path_.string());
  lines_loaded_ = map_.size();
  lines_skipped_ = 0;
}

}  // namespace geocov
