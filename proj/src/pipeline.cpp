// SPDX-License-Identifier: Apache-2.0

#include "geocov/pipeline.hpp"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace geocov {
namespace {

struct Chunk {
  std::uint64_t seq = 0;
  std::vector<RawTweet> tweets;
};

struct Output {
  std::uint64_t seq = 0;
  std::string text;
  std::uint64_t records = 0;
};

template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

  void push(T item) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
    items_.push_back(std::move(item));
    not_empty_.notify_one();
  }

  bool pop(T& item) {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return false;
    item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return true;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

 private:
  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable not_full_, not_empty_;
  std::deque<T> items_;
  bool closed_ = false;
};

nlohmann::ordered_json slot_json(const SlotCounters& s) {
  return {{"present", s.present},
          {"resolved", s.resolved},
          {"not_found", s.not_found},
          {"failed", s.failed}};
}

}  // namespace

PipelineResult run_resolve_pipeline(CorpusReader& reader, Resolver& resolver, std::ostream& sink,
                                    const PipelineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

  BoundedQueue<Chunk> work(workers * 2);
  BoundedQueue<Output> done(workers * 4);
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto record_failure = [&](std::exception_ptr e) {
    std::lock_guard lock(failure_mu);
    if (!failure) failure = e;
  };

  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      Chunk chunk;
      while (work.pop(chunk)) {
        Output out{chunk.seq, {}, 0};
        try {
          for (const auto& tweet : chunk.tweets) {
            out.text += to_json_line(resolver.resolve_tweet(tweet));
            out.text += '\n';
            ++out.records;
          }
        } catch (...) {
          record_failure(std::current_exception());
        }
        done.push(std::move(out));
      }
    });
  }

  std::uint64_t written = 0;
  std::thread writer([&] {
    std::map<std::uint64_t, Output> pending;
    std::uint64_t next = 0;
    Output out;
    while (done.pop(out)) {
      try {
        if (!options.preserve_order) {
          sink << out.text;
          written += out.records;
          continue;
        }
        pending.emplace(out.seq, std::move(out));
        for (auto it = pending.find(next); it != pending.end(); it = pending.find(next)) {
          sink << it->second.text;
          written += it->second.records;
          pending.erase(it);
          ++next;
        }
        if (!sink) throw std::runtime_error("failed writing GeoRecords");
      } catch (...) {
        record_failure(std::current_exception());
      }
    }
  });

  std::uint64_t seq = 0;
  try {
    Chunk chunk{seq, {}};
    while (auto tweet = reader.next()) {
      chunk.tweets.push_back(std::move(*tweet));
      if (chunk.tweets.size() == options.chunk_size) {
        work.push(std::move(chunk));
        chunk = Chunk{++seq, {}};
      }
    }
    if (!chunk.tweets.empty()) work.push(std::move(chunk));
  } catch (...) {
    record_failure(std::current_exception());
  }
  work.close();
  for (auto& t : pool) t.join();
  done.close();
  writer.join();
  sink.flush();
  if (!sink) record_failure(std::make_exception_ptr(std::runtime_error("failed writing GeoRecords")));
  if (failure) std::rethrow_exception(failure);

  PipelineResult result;
  result.records_written = written;
  result.ingest = reader.stats();
  result.counters = resolver.counters();
  result.geocoder = resolver.geocoder().stats();
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

nlohmann::ordered_json summary_json(const PipelineResult& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kGeoRecordSchemaVersion;
  j["records_written"] = r.records_written;
  j["ingest"] = {{"lines_read", r.ingest.lines_read},
                 {"parsed_ok", r.ingest.parsed_ok},
                 {"skipped_malformed", r.ingest.skipped_malformed},
                 {"filtered_out", r.ingest.filtered_out}};
  j["slots"] = {{"geo", slot_json(r.counters.geo)},
                {"place", slot_json(r.counters.place)},
                {"user_location", slot_json(r.counters.user_location)},
                {"tweet_locations", slot_json(r.counters.tweet_locations)}};
  j["geocoder"] = {{"network_requests", r.geocoder.network_requests},
                   {"cache_hits", r.geocoder.cache_hits},
                   {"retries", r.geocoder.retries},
                   {"failures", r.geocoder.failures}};
  j["trust_order"] = {"geo", "place", "user_location", "tweet_locations"};
  return j;
}

}  // namespace geocov
