// SPDX-License-Identifier: Apache-2.0

#include "geocov/hydrate.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <deque>
#include <future>
#include <optional>
#include <unordered_set>

#include "geocov/log.hpp"
#include "geocov/unicode.hpp"
#include "json.hpp"

namespace geocov {
namespace {

// Append-only file with explicit truncate and fsync.
class DurableFile {
 public:
  explicit DurableFile(const std::filesystem::path& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) fail("open");
  }
  ~DurableFile() {
    if (fd_ >= 0) ::close(fd_);
  }
  DurableFile(const DurableFile&) = delete;
  DurableFile& operator=(const DurableFile&) = delete;

  std::uint64_t size() const {
    struct stat st{};
    if (::fstat(fd_, &st) != 0) fail("stat");
    return static_cast<std::uint64_t>(st.st_size);
  }
  void truncate(std::uint64_t length) {
    if (::ftruncate(fd_, static_cast<off_t>(length)) != 0) fail("truncate");
  }
  void append(const std::string& data) {
    std::size_t done = 0;
    while (done < data.size()) {
      const auto n = ::write(fd_, data.data() + done, data.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail("write");
      }
      done += static_cast<std::size_t>(n);
    }
  }
  void sync() {
    if (::fsync(fd_) != 0) fail("fsync");
  }

 private:
  [[noreturn]] void fail(const char* what) const {
    throw std::runtime_error(std::string(what) + " failed for " + path_.string() + ": " +
                             std::strerror(errno));
  }
  std::filesystem::path path_;
  int fd_ = -1;
};

struct Checkpoint {
  std::uint64_t batches_done = 0;
  std::uint64_t output_bytes = 0;
  std::uint64_t missing_bytes = 0;
  std::uint64_t batch_size = 0;
};

std::optional<Checkpoint> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (!j.is_object()) throw std::runtime_error("corrupt checkpoint: " + path.string());
  return Checkpoint{j.value("batches_done", std::uint64_t{0}),
                    j.value("output_bytes", std::uint64_t{0}),
                    j.value("missing_bytes", std::uint64_t{0}),
                    j.value("batch_size", std::uint64_t{0})};
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  nlohmann::ordered_json j;
  j["batches_done"] = c.batches_done;
  j["output_bytes"] = c.output_bytes;
  j["missing_bytes"] = c.missing_bytes;
  j["batch_size"] = c.batch_size;
  auto tmp = path;
  tmp += ".tmp";
  {
    DurableFile f(tmp);
    f.truncate(0);
    f.append(j.dump() + "\n");
    f.sync();
  }
  std::filesystem::rename(tmp, path);
}

std::optional<std::uint64_t> record_id(const nlohmann::ordered_json& rec) {
  if (const auto it = rec.find("id_str"); it != rec.end() && it->is_string()) {
    const auto& s = it->get_ref<const std::string&>();
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) return v;
  }
  if (const auto it = rec.find("id"); it != rec.end() && it->is_number_unsigned())
    return it->get<std::uint64_t>();
  return std::nullopt;
}

std::chrono::milliseconds rate_limit_wait(const HttpResponse& r,
                                          std::chrono::milliseconds fallback) {
  if (const auto it = r.headers.find("x-rate-limit-reset"); it != r.headers.end()) {
    long long reset = 0;
    const auto& s = it->second;
    if (std::from_chars(s.data(), s.data() + s.size(), reset).ec == std::errc()) {
      const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
      if (reset > now) return std::chrono::seconds(reset - now + 1);
      return std::chrono::milliseconds(0);
    }
  }
  if (const auto it = r.headers.find("retry-after"); it != r.headers.end()) {
    int secs = 0;
    const auto& s = it->second;
    if (std::from_chars(s.data(), s.data() + s.size(), secs).ec == std::errc())
      return std::chrono::seconds(secs);
  }
  return fallback;
}

}  // namespace

std::vector<std::uint64_t> read_id_list(const std::filesystem::path& path,
                                        HydrationStats& stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read id list: " + path.string());
  std::vector<std::uint64_t> ids;
  std::unordered_set<std::uint64_t> seen;
  std::string line;
  while (std::getline(in, line)) {
    const auto pieces = unicode::split_whitespace(line);
    if (pieces.empty()) continue;
    std::uint64_t id = 0;
    const auto s = pieces.front();
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
    if (pieces.size() != 1 || ec != std::errc() || p != s.data() + s.size() || id == 0) {
      ++stats.malformed_lines;
      continue;
    }
    ++stats.ids_read;
    if (!seen.insert(id).second) {
      ++stats.duplicate_ids;
      continue;
    }
    ids.push_back(id);
  }
  return ids;
}

Hydrator::Hydrator(HydrateOptions options, std::shared_ptr<Transport> transport,
                   std::shared_ptr<TimeSource> time)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      time_(std::move(time)),
      limiter_(options_.limit, time_) {
  if (options_.batch_size == 0 || options_.batch_size > 100)
    throw std::invalid_argument("batch size must be within 1..100");
}

Hydrator::BatchResult Hydrator::fetch_batch(const std::vector<std::uint64_t>& ids) {
  HttpRequest req;
  req.base_url = options_.base_url;
  req.path = options_.lookup_path;
  std::string joined;
  for (const auto id : ids) {
    if (!joined.empty()) joined += ',';
    joined += std::to_string(id);
  }
  req.params = {{"id", joined}, {"tweet_mode", "extended"}};
  req.headers = {{"Authorization", "Bearer " + options_.bearer_token},
                 {"User-Agent", "geocov-hydrate/1.0"}};

  BatchResult out;
  std::size_t failures = 0;
  std::size_t throttled = 0;
  while (true) {
    limiter_.acquire();
    ++out.requests;
    const auto resp = transport_->get(req);
    if (resp.status == 200) {
      const auto doc = nlohmann::ordered_json::parse(resp.body, nullptr, false);
      if (!doc.is_array()) throw std::runtime_error("lookup response is not a JSON array");
      std::unordered_set<std::uint64_t> wanted(ids.begin(), ids.end());
      std::unordered_set<std::uint64_t> returned;
      for (const auto& rec : doc) {
        const auto id = record_id(rec);
        if (!id || !wanted.count(*id) || !returned.insert(*id).second) continue;
        out.records += rec.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
        out.records += '\n';
        ++out.written;
      }
      for (const auto id : ids) {
        if (returned.count(id)) continue;
        out.missing += std::to_string(id) + "\n";
        ++out.missing_count;
      }
      return out;
    }
    if (resp.status == 401 || resp.status == 403)
      throw HydrateAuthError("lookup rejected credentials (HTTP " + std::to_string(resp.status) +
                             ")");
    if (resp.status == 429) {
      if (++throttled > options_.max_rate_limited_retries)
        throw std::runtime_error("lookup still rate limited after retries");
      const auto wait = rate_limit_wait(resp, options_.backoff.empty()
                                                  ? std::chrono::milliseconds(1000)
                                                  : options_.backoff.back());
      log::warn("lookup rate limited", {{"wait_ms", wait.count()}});
      time_->sleep_for(wait);
      continue;
    }
    if (resp.status == 0 || resp.status >= 500) {
      if (failures >= options_.backoff.size())
        throw std::runtime_error("lookup failed after retries (status " +
                                 std::to_string(resp.status) + " " + resp.error + ")");
      time_->sleep_for(options_.backoff[failures++]);
      continue;
    }
    throw std::runtime_error("lookup failed with HTTP " + std::to_string(resp.status));
  }
}

HydrationStats Hydrator::run(HydratePaths paths) {
  if (paths.missing.empty()) paths.missing = paths.output.parent_path() / "missing_ids.txt";
  if (paths.checkpoint.empty()) {
    paths.checkpoint = paths.output;
    paths.checkpoint += ".checkpoint";
  }

  HydrationStats stats;
  const auto ids = read_id_list(paths.ids, stats);
  const auto batch_size = options_.batch_size;
  stats.batches_total = (ids.size() + batch_size - 1) / batch_size;

  DurableFile output(paths.output);
  DurableFile missing(paths.missing);
  Checkpoint cp;
  if (auto loaded = load_checkpoint(paths.checkpoint)) {
    cp = *loaded;
    if (cp.batch_size != batch_size)
      throw std::runtime_error("checkpoint was written with batch size " +
                               std::to_string(cp.batch_size));
    if (output.size() < cp.output_bytes || missing.size() < cp.missing_bytes)
      throw std::runtime_error("output files are shorter than the checkpoint records");
  }
  cp.batch_size = batch_size;
  output.truncate(cp.output_bytes);
  missing.truncate(cp.missing_bytes);
  stats.batches_resumed = cp.batches_done;

  auto batch_ids = [&](std::uint64_t b) {
    const auto begin = ids.begin() + static_cast<std::ptrdiff_t>(b * batch_size);
    const auto end = ids.begin() +
                     static_cast<std::ptrdiff_t>(std::min<std::size_t>(ids.size(), (b + 1) * batch_size));
    return std::vector<std::uint64_t>(begin, end);
  };

  const std::size_t window = std::max<std::size_t>(1, options_.max_in_flight);
  std::deque<std::future<BatchResult>> in_flight;
  std::uint64_t next_to_launch = cp.batches_done;
  while (cp.batches_done < stats.batches_total) {
    while (in_flight.size() < window && next_to_launch < stats.batches_total) {
      in_flight.push_back(std::async(std::launch::async,
                                     [this, ids = batch_ids(next_to_launch)] {
                                       return fetch_batch(ids);
                                     }));
      ++next_to_launch;
    }
    auto result = in_flight.front().get();
    in_flight.pop_front();
    output.append(result.records);
    missing.append(result.missing);
    output.sync();
    missing.sync();
    cp.output_bytes += result.records.size();
    cp.missing_bytes += result.missing.size();
    ++cp.batches_done;
    save_checkpoint(paths.checkpoint, cp);
    stats.requests += result.requests;
    stats.records_written += result.written;
    stats.missing += result.missing_count;
  }
  return stats;
}

}  // namespace geocov
