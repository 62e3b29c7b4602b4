// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "geocov/tweet.hpp"
#include "json.hpp"

namespace geocov {

enum class Level { kCountry, kState, kCounty, kCity };

inline constexpr Level kAllLevels[] = {Level::kCountry, Level::kState, Level::kCounty,
                                       Level::kCity};

const char* level_name(Level level);

/// A location at four granularity slots. Empty strings mean "not set".
struct ResolvedPlace {
  std::string country_code;  // lowercase ISO-3166 alpha-2
  std::string country;
  std::string state;
  std::string county;
  std::string city;
  std::optional<Coordinates> coordinates;
  std::optional<double> importance;

  /// At least one granularity slot is set (country_code counts for country).
  bool valid() const;
  /// Value compared at `level`; the country level uses country_code.
  const std::string& slot(Level level) const;

  friend bool operator==(const ResolvedPlace&, const ResolvedPlace&) = default;
};

/// Maps a Nominatim `address` object:
///   country_code <- country_code, country <- country,
///   state  <- state | province | region,
///   county <- county | district,
///   city   <- city | town | village | municipality | hamlet.
/// All values are normalized. Returns nullopt when nothing maps.
std::optional<ResolvedPlace> map_address(const nlohmann::json& address);

/// Output form: slots in fixed order, empty slots omitted. Coordinates are
/// written only when `with_coordinates` is set; importance is never written.
nlohmann::ordered_json place_to_json(const ResolvedPlace& place, bool with_coordinates);
ResolvedPlace place_from_json(const nlohmann::json& j);

}  // namespace geocov
