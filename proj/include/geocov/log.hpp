// SPDX-License-Identifier: Apache-2.0
//
// Structured logging: one JSON object per line on stderr.

#pragma once

#include <string_view>

#include "json.hpp"

namespace geocov::log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kOff = 4 };

void set_level(Level level);
Level level();

void write(Level level, std::string_view message, const nlohmann::json& fields = {});

inline void info(std::string_view m, const nlohmann::json& f = {}) { write(Level::kInfo, m, f); }
inline void warn(std::string_view m, const nlohmann::json& f = {}) { write(Level::kWarn, m, f); }
inline void error(std::string_view m, const nlohmann::json& f = {}) { write(Level::kError, m, f); }

}  // namespace geocov::log
