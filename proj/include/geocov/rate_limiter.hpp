// SPDX-License-Identifier: Apache-2.0
//
// Outbound request pacing. A limiter admits at most `max_requests` per
// `period` over every sliding window, and spaces admissions evenly at
// period / max_requests. The sliding window is widened by a small guard so
// that arrival jitter at the server cannot squeeze max_requests + 1 requests
// into one observed period.

#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <memory>
#include <mutex>

namespace geocov {

using Clock = std::chrono::steady_clock;

/// Time source; tests substitute a manual clock.
class TimeSource {
 public:
  virtual ~TimeSource() = default;
  virtual Clock::time_point now() = 0;
  virtual void sleep_until(Clock::time_point t) = 0;
  void sleep_for(Clock::duration d) { sleep_until(now() + d); }
};

class SystemTime final : public TimeSource {
 public:
  Clock::time_point now() override { return Clock::now(); }
  void sleep_until(Clock::time_point t) override;
  static std::shared_ptr<TimeSource> instance();
};

/// Simulated clock: sleeping advances time instantly.
class ManualTime final : public TimeSource {
 public:
  Clock::time_point now() override;
  void sleep_until(Clock::time_point t) override;
  void advance(Clock::duration d);

 private:
  std::mutex mu_;
  Clock::time_point now_{};
};

struct RateLimit {
  std::size_t max_requests = 1;
  Clock::duration period = std::chrono::seconds(1);
  Clock::duration guard = std::chrono::milliseconds(50);

  static RateLimit per_second(std::size_t n) { return {n, std::chrono::seconds(1)}; }
  /// The public Nominatim usage policy: 60 calls per minute.
  static RateLimit public_nominatim() { return {60, std::chrono::minutes(1)}; }
};

class RateLimiter {
 public:
  explicit RateLimiter(RateLimit limit,
                       std::shared_ptr<TimeSource> time = SystemTime::instance());

  /// Reserves the next admissible slot and blocks until it arrives.
  /// Safe for concurrent callers; returns the admitted time.
  Clock::time_point acquire();

  const RateLimit& limit() const { return limit_; }

 private:
  RateLimit limit_;
  std::shared_ptr<TimeSource> time_;
  Clock::duration spacing_;
  std::mutex mu_;
  std::deque<Clock::time_point> recent_;  // last max_requests reservations
};

}  // namespace geocov
