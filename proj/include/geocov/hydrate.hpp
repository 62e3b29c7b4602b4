// SPDX-License-Identifier: Apache-2.0
//
// Rehydrates shared tweet ids through the platform batch-lookup endpoint
// (GET <base>/1.1/statuses/lookup.json?id=<comma-separated ids>).
//
// Crash safety: after each batch the output and missing-id files are fsynced
// and a checkpoint {"batches_done", "output_bytes", "missing_bytes"} is
// atomically replaced. A resumed run truncates both files back to the
// checkpointed sizes and continues with the next batch, so a kill at any
// point never duplicates or loses lines.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "geocov/rate_limiter.hpp"
#include "geocov/transport.hpp"

namespace geocov {

inline constexpr const char* kBearerTokenEnv = "GEOCOV_BEARER_TOKEN";

class HydrateAuthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HydrateOptions {
  std::string base_url = "https://api.twitter.com";
  std::string lookup_path = "/1.1/statuses/lookup.json";
  std::string bearer_token;
  std::size_t batch_size = 100;
  std::size_t max_in_flight = 1;
  /// Lookup allows 900 requests per 15-minute window for app auth.
  RateLimit limit{900, std::chrono::minutes(15)};
  std::vector<std::chrono::milliseconds> backoff = {std::chrono::seconds(1),
                                                    std::chrono::seconds(4),
                                                    std::chrono::seconds(16)};
  std::size_t max_rate_limited_retries = 16;
};

struct HydratePaths {
  std::filesystem::path ids;
  std::filesystem::path output;
  std::filesystem::path missing;     // default: <output dir>/missing_ids.txt
  std::filesystem::path checkpoint;  // default: <output>.checkpoint
};

struct HydrationStats {
  std::uint64_t ids_read = 0;
  std::uint64_t malformed_lines = 0;
  std::uint64_t duplicate_ids = 0;
  std::uint64_t batches_total = 0;
  std::uint64_t batches_resumed = 0;  // skipped thanks to the checkpoint
  std::uint64_t requests = 0;
  std::uint64_t records_written = 0;
  std::uint64_t missing = 0;
};

/// Parses an id list: one decimal id per line; blank lines are ignored,
/// anything else non-numeric is counted as malformed.
std::vector<std::uint64_t> read_id_list(const std::filesystem::path& path,
                                        HydrationStats& stats);

class Hydrator {
 public:
  Hydrator(HydrateOptions options, std::shared_ptr<Transport> transport,
           std::shared_ptr<TimeSource> time = SystemTime::instance());

  /// Throws HydrateAuthError on 401/403, std::runtime_error when a batch
  /// exhausts its retries (the run can be resumed).
  HydrationStats run(HydratePaths paths);

 private:
  struct BatchResult {
    std::string records;  // newline-terminated lines
    std::string missing;  // newline-terminated ids
    std::uint64_t written = 0;
    std::uint64_t missing_count = 0;
    std::uint64_t requests = 0;
  };
  BatchResult fetch_batch(const std::vector<std::uint64_t>& ids);

  HydrateOptions options_;
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<TimeSource> time_;
  RateLimiter limiter_;
};

}  // namespace geocov
