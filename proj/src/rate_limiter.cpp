// SPDX-License-Identifier: Apache-2.0

#include "geocov/rate_limiter.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace geocov {

void SystemTime::sleep_until(Clock::time_point t) { std::this_thread::sleep_until(t); }

std::shared_ptr<TimeSource> SystemTime::instance() {
  static auto time = std::make_shared<SystemTime>();
  return time;
}

Clock::time_point ManualTime::now() {
  std::lock_guard lock(mu_);
  return now_;
}

void ManualTime::sleep_until(Clock::time_point t) {
  std::lock_guard lock(mu_);
  now_ = std::max(now_, t);
}

void ManualTime::advance(Clock::duration d) {
  std::lock_guard lock(mu_);
  now_ += d;
}

RateLimiter::RateLimiter(RateLimit limit, std::shared_ptr<TimeSource> time)
    : limit_(limit), time_(std::move(time)) {
  if (limit_.max_requests == 0 || limit_.period <= Clock::duration::zero())
    throw std::invalid_argument("rate limit must admit at least one request per period");
  spacing_ = limit_.period / static_cast<Clock::rep>(limit_.max_requests);
}

Clock::time_point RateLimiter::acquire() {
  Clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    slot = time_->now();
    if (!recent_.empty()) slot = std::max(slot, recent_.back() + spacing_);
    if (recent_.size() == limit_.max_requests)
      slot = std::max(slot, recent_.front() + limit_.period + limit_.guard);
    recent_.push_back(slot);
    if (recent_.size() > limit_.max_requests) recent_.pop_front();
  }
  time_->sleep_until(slot);
  return slot;
}

}  // namespace geocov
