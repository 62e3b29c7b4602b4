// SPDX-License-Identifier: Apache-2.0

#include "geocov/place.hpp"

#include <initializer_list>

#include "geocov/gazetteer.hpp"

namespace geocov {
namespace {

std::string first_present(const nlohmann::json& address, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    const auto it = address.find(key);
    if (it != address.end() && it->is_string()) {
      auto v = normalize(it->get_ref<const std::string&>());
      if (!v.empty()) return v;
    }
  }
  return {};
}

}  // namespace

const char* level_name(Level level) {
  switch (level) {
    case Level::kCountry: return "country";
    case Level::kState: return "state";
    case Level::kCounty: return "county";
    case Level::kCity: return "city";
  }
  return "?";
}

bool ResolvedPlace::valid() const {
  return !country_code.empty() || !country.empty() || !state.empty() || !county.empty() ||
         !city.empty();
}

const std::string& ResolvedPlace::slot(Level level) const {
  switch (level) {
    case Level::kCountry: return country_code;
    case Level::kState: return state;
    case Level::kCounty: return county;
    case Level::kCity: return city;
  }
  return city;
}

std::optional<ResolvedPlace> map_address(const nlohmann::json& address) {
  if (!address.is_object()) return std::nullopt;
  ResolvedPlace p;
  p.country_code = first_present(address, {"country_code"});
  if (p.country_code.size() != 2) p.country_code.clear();
  p.country = first_present(address, {"country"});
  p.state = first_present(address, {"state", "province", "region"});
  p.county = first_present(address, {"county", "district"});
  p.city = first_present(address, {"city", "town", "village", "municipality", "hamlet"});
  if (!p.valid()) return std::nullopt;
  return p;
}

nlohmann::ordered_json place_to_json(const ResolvedPlace& p, bool with_coordinates) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (!p.country_code.empty()) j["country_code"] = p.country_code;
  if (!p.country.empty()) j["country"] = p.country;
  if (!p.state.empty()) j["state"] = p.state;
  if (!p.county.empty()) j["county"] = p.county;
  if (!p.city.empty()) j["city"] = p.city;
  if (with_coordinates && p.coordinates) {
    j["lat"] = p.coordinates->latitude;
    j["lon"] = p.coordinates->longitude;
  }
  return j;
}

ResolvedPlace place_from_json(const nlohmann::json& j) {
  ResolvedPlace p;
  p.country_code = j.value("country_code", "");
  p.country = j.value("country", "");
  p.state = j.value("state", "");
  p.county = j.value("county", "");
  p.city = j.value("city", "");
  if (j.contains("lat") && j.contains("lon"))
    p.coordinates = Coordinates{j["lat"].get<double>(), j["lon"].get<double>()};
  return p;
}

}  // namespace geocov
