// SPDX-License-Identifier: Apache-2.0

#include "geocov/log.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>

#include "geocov/tweet.hpp"

namespace geocov::log {
namespace {

std::atomic<Level> g_level{Level::kInfo};
std::mutex g_mu;

const char* name(Level l) {
  switch (l) {
    case Level::kDebug: return "debug";
    case Level::kInfo: return "info";
    case Level::kWarn: return "warn";
    case Level::kError: return "error";
    case Level::kOff: break;
  }
  return "off";
}

}  // namespace

void set_level(Level l) { g_level = l; }
Level level() { return g_level; }

void write(Level l, std::string_view message, const nlohmann::json& fields) {
  if (l < g_level.load() || g_level.load() == Level::kOff) return;
  nlohmann::ordered_json line;
  line["ts"] = format_timestamp(
      std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
  line["level"] = name(l);
  line["msg"] = message;
  if (fields.is_object())
    for (const auto& [k, v] : fields.items()) line[k] = v;
  const auto text =
      line.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
  std::lock_guard lock(g_mu);
  std::fwrite(text.data(), 1, text.size(), stderr);
}

}  // namespace geocov::log
