// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one line per criterion and exits non-zero when
// any criterion fails. Each check compares the library or the CLI against an
// oracle that does not reuse the code under test.

#include <signal.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "geocov/eval.hpp"
#include "geocov/geocoder.hpp"
#include "geocov/resolve.hpp"
#include "geocov/stats.hpp"
#include "geocov/toponym.hpp"
#include "geocov/tweet.hpp"
#include "json.hpp"
#include "stub_server.hpp"
#include "test_util.hpp"

namespace {

using namespace geocov;
using namespace std::chrono_literals;
using SteadyClock = std::chrono::steady_clock;
namespace t = geocov::testing;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(SteadyClock::time_point start) {
  return std::chrono::duration<double>(SteadyClock::now() - start).count();
}

std::string fmt(double v, int digits = 2) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

// Accumulates mismatches so a failing criterion reports its first few causes.
class Failures {
 public:
  void add(const std::string& what) {
    if (++count_ <= 5) text_ += (text_.empty() ? "" : "; ") + what;
  }
  bool empty() const { return count_ == 0; }
  std::string summary() const {
    return std::to_string(count_) + " mismatch(es): " + text_;
  }

 private:
  std::size_t count_ = 0;
  std::string text_;
};

std::vector<std::string> fixture_args() {
  return {"--gazetteer", t::data_file("gazetteer.csv").string(), "--stopwords",
          t::data_file("stopwords.txt").string()};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

nlohmann::json read_json(const std::filesystem::path& p) {
  return nlohmann::json::parse(t::read_file(p));
}

// ------------------------------------------------------------------------ 1

struct Trace {
  std::string text;
  std::vector<ToponymCandidate> survivors;
  bool unwrap_hashtags = true;
};

// Expected survivors were worked out by hand: split on whitespace, classify
// noise, trim and lowercase, pair adjacent clean tokens, then drop stop-words
// and phrases the fixture gazetteer does not list.
std::vector<Trace> hand_traces() {
  const std::string sao_nfc = "S\xC3\xA3o Paulo";
  const std::string sao_nfd = "Sa\xCC\x83o Paulo";
  return {
      {"RT @bob Stay safe! https://t.co/x 2020 Paris", {{"paris", 1, 6}}},
      {"#Italy lockdown!!!", {{"italy", 1, 0}}},
      {"new york", {{"new york", 2, 0}, {"york", 1, 1}}},
      {"Stuck in New York, wish I was in Paris",
       {{"new york", 2, 2}, {"york", 1, 3}, {"paris", 1, 8}}},
      {"London, UK", {{"london", 1, 0}, {"uk", 1, 1}}},
      {"I love NEW DELHI!!", {{"new delhi", 2, 2}, {"delhi", 1, 3}}},
      {sao_nfc, {{"s\xC3\xA3o paulo", 2, 0}}},
      {sao_nfd, {{"s\xC3\xA3o paulo", 2, 0}}},
      {"@Paris is nice", {{"nice", 1, 2}}},
      {"https://paris.fr Paris", {{"paris", 1, 1}}},
      {"www.London.com", {}},
      {"Paris2020", {}},
      {"10,000 cases in Wuhan", {{"wuhan", 1, 3}}},
      {"Los Angeles \xE2\x86\x92 San Francisco", {{"los angeles", 2, 0}, {"san francisco", 2, 3}}},
      {"Rio de Janeiro", {}},
      {"Hong-Kong", {}},
      {"hong kong", {{"hong kong", 2, 0}}},
      {"rt London", {{"london", 1, 1}}},
      {"#NewYork", {}},
      {"K\xC3\xB6ln und Z\xC3\xBCrich", {{"k\xC3\xB6ln", 1, 0}, {"z\xC3\xBCrich", 1, 2}}},
      {"ISTANBUL'DA", {}},
      {"paris paris Paris", {{"paris", 1, 0}, {"paris", 1, 1}, {"paris", 1, 2}}},
      {"Las Vegas, NV", {{"las vegas", 2, 0}}},
      {"the new york times", {{"new york", 2, 1}, {"york", 1, 2}}},
      {"Buenos Aires \xF0\x9F\x87\xA6\xF0\x9F\x87\xB7", {{"buenos aires", 2, 0}}},
      {"(Madrid)", {{"madrid", 1, 0}}},
      {"Victoria's secret", {}},
      {"#Italy lockdown", {}, false},
      {"\tParis\n\nLondon ", {{"paris", 1, 0}, {"london", 1, 1}}},
      {"", {}},
  };
}

std::string show(const std::vector<ToponymCandidate>& cs) {
  std::string s = "[";
  for (const auto& c : cs)
    s += (s.size() > 1 ? ", " : "") + c.phrase + "(" + std::to_string(c.arity) + "," +
         std::to_string(c.position) + ")";
  return s + "]";
}

Outcome criterion_toponyms() {
  const auto start = SteadyClock::now();
  const auto index = GazetteerIndex::from_csv(t::data_file("gazetteer.csv"));
  const auto stop = StopWords::load(t::data_file("stopwords.txt"));
  Failures f;
  const auto traces = hand_traces();
  for (const auto& tr : traces) {
    PreprocessOptions opts;
    opts.unwrap_hashtags = tr.unwrap_hashtags;
    const auto got = extract_toponyms(tr.text, index, stop, opts);
    if (got != tr.survivors) f.add("'" + tr.text + "' gave " + show(got));
  }
  // The bigram must survive while its stop-word prefix is pruned.
  if (!stop.contains("new")) f.add("fixture stop-words lack 'new'");
  const double secs = seconds_since(start);
  if (secs >= 1.0) f.add("took " + fmt(secs) + " s");
  if (!f.empty()) return {false, f.summary()};
  return {true, std::to_string(traces.size()) + " texts, " + fmt(secs * 1000, 1) + " ms"};
}

// ------------------------------------------------------------------------ 2

Outcome criterion_vote() {
  const auto start = SteadyClock::now();
  std::mt19937_64 rng(2024);
  const std::vector<std::string> countries = {"us", "gb", "fr", "in", "br"};
  const std::vector<double> importances = {0.2, 0.4, 0.4, 0.6, 0.8};  // repeated values force ties
  Failures f;
  std::size_t ties = 0;
  for (int round = 0; round < 1000; ++round) {
    const std::size_t n_countries = 1 + rng() % 5;
    const std::size_t n = 1 + rng() % 8;
    std::vector<std::size_t> positions(20);
    std::iota(positions.begin(), positions.end(), 0);
    std::shuffle(positions.begin(), positions.end(), rng);
    std::vector<VoteEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
      VoteEntry e;
      e.phrase = "p" + std::to_string(i);
      e.position = positions[i];
      for (auto k = 1 + rng() % 3; k > 0; --k) {
        ResolvedPlace p;
        p.country_code = countries[rng() % n_countries];
        p.city = "c" + std::to_string(rng() % 1000);
        p.importance = importances[rng() % importances.size()];
        e.results.push_back(p);
      }
      entries.push_back(e);
    }

    // Brute force: tally top results per country, keep the strongest tally,
    // then compare each tied country's best candidate.
    std::map<std::string, int> tally;
    for (const auto& e : entries) ++tally[e.results[0].country_code];
    int most = 0;
    for (const auto& [cc, c] : tally) most = std::max(most, c);
    std::string expected_cc;
    double best_imp = -1;
    std::size_t best_pos = 0;
    std::string expected_city;
    int tied = 0;
    for (const auto& [cc, c] : tally) {
      if (c != most) continue;
      ++tied;
      for (const auto& e : entries) {
        const auto& top = e.results[0];
        if (top.country_code != cc) continue;
        const double imp = *top.importance;
        if (imp > best_imp || (imp == best_imp && e.position < best_pos)) {
          best_imp = imp;
          best_pos = e.position;
          expected_cc = cc;
          expected_city = top.city;
        }
      }
    }
    ties += tied > 1;
    const auto got = majority_vote(entries);
    if (!got || got->country_code != expected_cc || got->city != expected_city)
      f.add("round " + std::to_string(round) + " expected " + expected_cc + "/" + expected_city +
            " got " + (got ? got->country_code + "/" + got->city : "none"));
  }
  const double secs = seconds_since(start);
  if (secs >= 5.0) f.add("took " + fmt(secs) + " s");
  if (!f.empty()) return {false, f.summary()};
  return {true, "1000 sets (" + std::to_string(ties) + " country ties), " + fmt(secs * 1000, 1) +
                    " ms"};
}

// ------------------------------------------------------------------------ 3

Outcome criterion_end_to_end() {
  t::TempDir dir;
  const auto golden = t::read_file(t::data_file("golden_geo.jsonl"));
  std::vector<std::string> outputs;
  for (const auto& workers : {"1", "4"}) {
    const auto out = dir / (std::string("geo-") + workers + ".jsonl");
    const auto r = t::run_cli_process(concat(
        {"resolve", "--in", t::data_file("corpus.jsonl").string(), "--out", out.string(),
         "--fixtures", t::data_file("geocoder_fixtures.jsonl").string(), "--workers", workers},
        fixture_args()));
    if (r.exit_code != 0) return {false, "resolve exited " + std::to_string(r.exit_code) + ": " + r.err};
    outputs.push_back(t::read_file(out));
  }
  if (outputs[0] != outputs[1]) return {false, "two runs differ"};
  if (outputs[0] != golden) return {false, "output differs from golden file"};
  const auto lines = std::count(golden.begin(), golden.end(), '\n');
  return {true, "2 runs byte-identical, " + std::to_string(lines) + " records equal golden"};
}

// ------------------------------------------------------------------------ 4

Outcome criterion_evaluation() {
  const auto r = t::run_cli_process(concat(
      {"evaluate", "--in", t::data_file("corpus.jsonl").string(), "--fixtures",
       t::data_file("geocoder_fixtures.jsonl").string(), "-n", "1000"},
      fixture_args()));
  if (r.exit_code != 0) return {false, "evaluate exited " + std::to_string(r.exit_code)};

  // Naive recount straight from the golden JSON, without the library parser.
  const char* levels[][2] = {{"country", "country_code"}, {"state", "state"},
                             {"county", "county"}, {"city", "city"}};
  const char* sources[][2] = {{"user_location", "user_location"},
                              {"tweet_content", "tweet_locations"}};
  std::vector<nlohmann::json> pool;
  for (const auto& line : t::read_lines(t::data_file("golden_geo.jsonl"))) {
    auto j = nlohmann::json::parse(line);
    if (j.contains("geo") && j.contains("user_location") && j.contains("tweet_locations"))
      pool.push_back(std::move(j));
  }
  std::string expected = "source,level,matches,samples,accuracy\n";
  std::map<std::string, std::vector<double>> accuracy;
  for (const auto& src : sources) {
    for (const auto& lvl : levels) {
      int hits = 0;
      for (const auto& j : pool) {
        const auto a = j[src[1]].value(lvl[1], std::string());
        const auto b = j["geo"].value(lvl[1], std::string());
        hits += !a.empty() && a == b;
      }
      const double acc = pool.empty() ? 0.0 : static_cast<double>(hits) / pool.size();
      accuracy[src[0]].push_back(acc);
      char row[128];
      std::snprintf(row, sizeof row, "%s,%s,%d,%zu,%.4f\n", src[0], lvl[0], hits, pool.size(), acc);
      expected += row;
    }
  }
  if (r.out != expected) return {false, "CLI table differs from naive recount:\n" + r.out};
  if (r.out != t::read_file(t::data_file("golden_eval.csv")))
    return {false, "CLI table differs from checked-in golden_eval.csv"};

  // Reference accuracies for the two sources, non-increasing from country to
  // city. The fixture is expected to show the same shape.
  const std::vector<std::vector<double>> reference = {{0.86, 0.62, 0.34, 0.27},
                                                      {0.75, 0.48, 0.29, 0.23}};
  for (const auto& row : reference)
    if (!std::is_sorted(row.rbegin(), row.rend())) return {false, "reference table not monotone"};
  for (const auto& [src, accs] : accuracy)
    if (!std::is_sorted(accs.rbegin(), accs.rend()))
      return {false, src + " accuracy is not non-increasing from country to city"};
  return {true, "recount exact over " + std::to_string(pool.size()) + " samples; country " +
                    fmt(accuracy["user_location"][0], 4) + "/" +
                    fmt(accuracy["tweet_content"][0], 4) + " >= ... >= city " +
                    fmt(accuracy["user_location"][3], 4) + "/" +
                    fmt(accuracy["tweet_content"][3], 4)};
}

// ------------------------------------------------------------------------ 5

Outcome criterion_rate_limit() {
  const std::vector<std::size_t> ceilings = {1, 10, 100};
  const auto run_for = 30s;
  struct Run {
    std::size_t ceiling = 0;
    std::size_t requests = 0;
    std::size_t worst = 0;
  };
  std::vector<Run> runs(ceilings.size());
  std::vector<std::thread> drivers;
  for (std::size_t i = 0; i < ceilings.size(); ++i) {
    drivers.emplace_back([&, i] {
      t::StubServer server([](const t::StubRequest&) { return t::StubResponse{200, "[]"}; });
      GeocoderOptions o;
      o.endpoints = {{server.base_url(), RateLimit::per_second(ceilings[i])}};
      o.backoff = {};
      Geocoder g(o, std::make_shared<HttpTransport>(5s), nullptr);
      const auto deadline = SteadyClock::now() + run_for;
      std::atomic<std::uint64_t> next{0};
      std::vector<std::thread> callers;
      for (int c = 0; c < 4; ++c)
        callers.emplace_back([&] {
          while (SteadyClock::now() < deadline) g.search("q" + std::to_string(next++));
        });
      for (auto& c : callers) c.join();
      runs[i] = {ceilings[i], server.request_count(), t::max_in_window(server.arrivals(), 1s)};
    });
  }
  for (auto& d : drivers) d.join();
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    ok &= r.worst <= r.ceiling && r.requests > 0;
    detail += (detail.empty() ? "" : ", ") + std::to_string(r.ceiling) + "/s: max " +
              std::to_string(r.worst) + " in any 1 s window (" + std::to_string(r.requests) +
              " requests)";
  }
  return {ok, detail + " over 30 s"};
}

// ------------------------------------------------------------------------ 6

Outcome criterion_cache() {
  t::TempDir dir;
  const auto cache = (dir / "cache.jsonl").string();
  const auto corpus = t::data_file("corpus.jsonl").string();
  auto cold = t::run_cli_process(concat(
      {"resolve", "--in", corpus, "--out", (dir / "cold.jsonl").string(), "--cache", cache,
       "--fixtures", t::data_file("geocoder_fixtures.jsonl").string()},
      fixture_args()));
  // No endpoints on the warm run: any cache miss would have to go to the network.
  auto warm = t::run_cli_process(concat(
      {"resolve", "--in", corpus, "--out", (dir / "warm.jsonl").string(), "--cache", cache},
      fixture_args()));
  if (cold.exit_code != 0 || warm.exit_code != 0) return {false, "resolve failed"};
  const auto cold_requests =
      read_json(dir / "cold.jsonl.summary.json")["geocoder"]["network_requests"].get<std::uint64_t>();
  const auto warm_requests =
      read_json(dir / "warm.jsonl.summary.json")["geocoder"]["network_requests"].get<std::uint64_t>();
  if (t::read_file(dir / "cold.jsonl") != t::read_file(dir / "warm.jsonl"))
    return {false, "cold and warm GeoRecords differ"};
  if (warm_requests != 0) return {false, "warm run issued " + std::to_string(warm_requests) + " requests"};
  if (cold_requests == 0) return {false, "cold run issued no requests"};
  return {true, "identical output; cold " + std::to_string(cold_requests) + " requests, warm 0"};
}

// ------------------------------------------------------------------------ 7

Outcome criterion_stats() {
  std::mt19937_64 rng(77);
  const std::vector<std::string> ccs = {"us", "gb", "in", "fr", "br", "es", "ng", ""};
  const std::vector<std::string> cities = {"london", "paris", "new york", "mumbai", ""};
  const std::vector<std::string> langs = {"en", "es", "fr", "und", ""};
  auto random_place = [&]() -> std::optional<ResolvedPlace> {
    if (rng() % 3 == 0) return std::nullopt;
    ResolvedPlace p;
    p.country_code = ccs[rng() % ccs.size()];
    p.city = cities[rng() % cities.size()];
    if (!p.valid()) p.city = "x";
    return p;
  };
  CorpusSummary whole;
  std::vector<CorpusSummary> shards(4);
  for (int i = 0; i < 10000; ++i) {
    RawTweet tw;
    tw.tweet_id = 1 + i;
    tw.user_id = 1 + rng() % 1500;
    if (rng() % 20) tw.created_at = Timestamp{std::chrono::seconds(1580515200 + rng() % (90 * 86400))};
    const auto lang = langs[rng() % langs.size()];
    if (!lang.empty()) tw.language = lang;
    tw.user_verified = rng() % 25 == 0;
    if (rng() % 10 == 0) tw.coordinates = Coordinates{1, 1};
    if (rng() % 8 == 0) tw.place_full_name = "somewhere";
    GeoRecord rec;
    rec.geo = tw.coordinates ? random_place() : std::nullopt;
    rec.place = random_place();
    rec.user_location = random_place();
    rec.tweet_locations = random_place();
    const bool has_record = rng() % 6 != 0;
    whole.add(tw, has_record ? &rec : nullptr);
    shards[i / 2500].add(tw, has_record ? &rec : nullptr);
  }
  CorpusSummary merged;
  for (const auto& s : {shards[2], shards[0], shards[3], shards[1]}) merged.merge(s);
  if (!(merged == whole)) return {false, "merged shards differ from the whole"};

  // Cumulative buckets: a 12M country belongs to every row it exceeds.
  const std::map<std::string, std::uint64_t> volumes = {
      {"aa", 12'000'000}, {"bb", 2'000'000}, {"cc", 700'000}, {"dd", 150'000}, {"ee", 90'000}};
  const auto rows = bucket_table(volumes, kCountryThresholds);
  const std::vector<BucketRow> expected = {{10'000'000, ">10M", 1},
                                           {1'000'000, ">1M", 2},
                                           {500'000, ">500K", 3},
                                           {100'000, ">100K", 4}};
  if (rows != expected) return {false, "bucket rows differ from cumulative expectation"};
  return {true, "4 shards merge exactly over 10000 tweets; 12M country counted in >10M and >1M"};
}

// ------------------------------------------------------------------------ 8

Outcome criterion_throughput() {
  t::TempDir dir;
  const auto cache = (dir / "cache.jsonl").string();
  auto cold = t::run_cli_process(concat(
      {"resolve", "--in", t::data_file("corpus.jsonl").string(), "--out",
       (dir / "cold.jsonl").string(), "--cache", cache, "--fixtures",
       t::data_file("geocoder_fixtures.jsonl").string()},
      fixture_args()));
  if (cold.exit_code != 0) return {false, "cache warm-up failed"};

  // One million lines built from the fixture tweets with fresh ids.
  std::vector<nlohmann::json> templates;
  for (const auto& line : t::read_lines(t::data_file("corpus.jsonl"))) {
    // Malformed and empty fixture tweets would not produce a record.
    if (!parse_tweet(line)) continue;
    templates.push_back(nlohmann::json::parse(line));
  }
  constexpr std::size_t kLines = 1'000'000;
  {
    std::ofstream out(dir / "big.jsonl", std::ios::binary);
    for (std::size_t i = 0; i < kLines; ++i) {
      auto& j = templates[i % templates.size()];
      const std::uint64_t id = 1'300'000'000'000'000'000ULL + i;
      j["id"] = id;
      j["id_str"] = std::to_string(id);
      out << j.dump() << '\n';
    }
  }
  const auto start = SteadyClock::now();
  auto warm = t::run_cli_process(concat(
      {"resolve", "--in", (dir / "big.jsonl").string(), "--out", "/dev/null", "--summary",
       (dir / "big.summary.json").string(), "--cache", cache},
      fixture_args()));
  const double secs = seconds_since(start);
  if (warm.exit_code != 0) return {false, "resolve failed: " + warm.err};
  const auto summary = read_json(dir / "big.summary.json");
  const auto written = summary["records_written"].get<std::uint64_t>();
  const auto requests = summary["geocoder"]["network_requests"].get<std::uint64_t>();
  const double rate = written / secs;
  const std::string detail = fmt(rate, 0) + " tweets/s (" + std::to_string(written) + " in " +
                             fmt(secs) + " s, " + std::to_string(std::thread::hardware_concurrency()) +
                             " core(s), " + std::to_string(requests) + " network requests)";
  return {rate >= 5000.0 && requests == 0 && written == kLines, detail};
}

// ------------------------------------------------------------------------ 9

Outcome criterion_hydrate() {
  t::TempDir dir;
  constexpr std::uint64_t kFirst = 900'000, kCount = 400;
  std::string ids;
  for (std::uint64_t i = 0; i < kCount; ++i) ids += std::to_string(kFirst + i) + "\n";
  t::write_file(dir / "ids.txt", ids);

  t::StubServer server([](const t::StubRequest& req) {
    if (req.headers.count("Authorization") == 0) return t::StubResponse{401, "{}"};
    nlohmann::json arr = nlohmann::json::array();
    std::stringstream ss(req.params.count("id") ? req.params.at("id") : "");
    for (std::string piece; std::getline(ss, piece, ',');) {
      const auto id = std::stoull(piece);
      if (id % 7 != 0) arr.push_back({{"id_str", piece}, {"full_text", "hello"}});
    }
    return t::StubResponse{200, arr.dump()};
  });
  const std::vector<std::string> args = {
      "hydrate",      "--ids",  (dir / "ids.txt").string(), "--out", (dir / "out.jsonl").string(),
      "--base-url",   server.base_url(),   "--batch-size",  "10",   "--max-requests",
      "20",           "--period-ms", "1000"};
  const std::vector<std::string> env = {"GEOCOV_BEARER_TOKEN=test-token"};

  int kills = 0;
  for (const std::size_t kill_after : {6u, 19u}) {
    const auto pid = t::spawn_cli(args, dir / "stdout.txt", "/dev/null", env);
    const auto deadline = SteadyClock::now() + 30s;
    while (server.request_count() < kill_after && SteadyClock::now() < deadline)
      std::this_thread::sleep_for(5ms);
    ::kill(pid, SIGKILL);
    if (t::wait_child(pid) == 128 + SIGKILL) ++kills;
  }
  const auto pid = t::spawn_cli(args, dir / "stdout.txt", "/dev/null", env);
  if (const int code = t::wait_child(pid); code != 0)
    return {false, "resumed run exited " + std::to_string(code)};
  const auto stats = read_json(dir / "stdout.txt");

  std::multiset<std::uint64_t> seen;
  for (const auto& line : t::read_lines(dir / "out.jsonl"))
    seen.insert(std::stoull(nlohmann::json::parse(line)["id_str"].get<std::string>()));
  for (const auto& line : t::read_lines(dir / "missing_ids.txt")) seen.insert(std::stoull(line));
  std::multiset<std::uint64_t> expected;
  for (std::uint64_t i = 0; i < kCount; ++i) expected.insert(kFirst + i);
  if (seen != expected)
    return {false, std::to_string(seen.size()) + " ids recovered vs " + std::to_string(kCount) +
                       " expected (duplicates or gaps)"};
  if (kills == 0) return {false, "the run finished before it could be killed"};
  return {true, std::to_string(kills) + " SIGKILLs; resumed " +
                    std::to_string(stats["batches_resumed"].get<int>()) + "/40 batches; " +
                    std::to_string(kCount) + " ids = output + missing, no duplicates"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Toponym hand-trace suite", criterion_toponyms},
      {"Vote oracle", criterion_vote},
      {"End-to-end fixture corpus", criterion_end_to_end},
      {"Evaluation oracle", criterion_evaluation},
      {"Rate-limit property", criterion_rate_limit},
      {"Cache transparency", criterion_cache},
      {"Stats mergeability", criterion_stats},
      {"Throughput smoke", criterion_throughput},
      {"Hydration resumability", criterion_hydrate},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << ". " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
