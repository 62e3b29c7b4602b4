// SPDX-License-Identifier: Apache-2.0

#include "geocov/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "geocov/config.hpp"
#include "geocov/eval.hpp"
#include "geocov/gazetteer.hpp"
#include "geocov/hydrate.hpp"
#include "geocov/ingest.hpp"
#include "geocov/log.hpp"
#include "geocov/pipeline.hpp"
#include "geocov/stats.hpp"

namespace geocov {
namespace {

struct Args {
  std::string config_path;
  std::string in, out, summary, geo, out_dir;
  std::vector<std::string> endpoints;
  std::size_t qps = 1;
  std::string ids, missing, checkpoint;
  std::string cache_action;
};

std::string find_config_flag(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return std::string(a.substr(9));
  }
  return {};
}

GazetteerIndex load_gazetteer(const Config& c) {
  if (!c.gazetteer.snapshot.empty() && std::filesystem::exists(c.gazetteer.snapshot))
    return GazetteerIndex::load_snapshot(c.gazetteer.snapshot);
  if (!c.gazetteer.csv.empty()) return GazetteerIndex::from_csv(c.gazetteer.csv);
  throw ConfigError("no gazetteer configured (gazetteer.csv or gazetteer.snapshot)");
}

StopWords load_stopwords(const Config& c) {
  if (c.toponym.stopwords.empty()) {
    log::warn("no stop-word list configured; only gazetteer pruning applies");
    return {};
  }
  return StopWords::load(c.toponym.stopwords);
}

std::shared_ptr<Transport> make_geocode_transport(const Config& c) {
  if (!c.geocoder.fixtures.empty()) return std::make_shared<RecordedTransport>(c.geocoder.fixtures);
  if (c.geocoder.endpoints.empty()) {
    log::warn("no geocoder endpoints configured; only cached responses are available");
    return std::make_shared<OfflineTransport>();
  }
  return std::make_shared<HttpTransport>(std::chrono::milliseconds(c.geocoder.timeout_ms));
}

Config& apply_endpoint_flags(Config& c, const Args& a) {
  if (!a.endpoints.empty()) {
    c.geocoder.endpoints.clear();
    for (const auto& url : a.endpoints)
      c.geocoder.endpoints.push_back({url, RateLimit::per_second(a.qps)});
  }
  if (!c.geocoder.fixtures.empty() && c.geocoder.endpoints.empty())
    c.geocoder.endpoints.push_back({"fixture://recorded", RateLimit::per_second(1'000'000)});
  return c;
}

log::Level parse_level(const std::string& s) {
  static const std::unordered_map<std::string, log::Level> kLevels = {
      {"debug", log::Level::kDebug}, {"info", log::Level::kInfo}, {"warn", log::Level::kWarn},
      {"error", log::Level::kError}, {"off", log::Level::kOff}};
  const auto it = kLevels.find(s);
  if (it == kLevels.end()) throw ConfigError("unknown log level: " + s);
  return it->second;
}

// Resolution context shared by `resolve` and `evaluate`.
struct ResolveContext {
  GazetteerIndex index;
  StopWords stopwords;
  std::shared_ptr<GeocodeCache> cache;
  std::unique_ptr<Geocoder> geocoder;
  std::unique_ptr<Resolver> resolver;
  KeywordSet keywords;
};

std::unique_ptr<ResolveContext> make_context(const Config& c) {
  auto ctx = std::make_unique<ResolveContext>();
  ctx->index = load_gazetteer(c);
  ctx->stopwords = load_stopwords(c);
  ctx->cache = c.geocoder.cache.empty() ? std::make_shared<GeocodeCache>()
                                        : std::make_shared<GeocodeCache>(c.geocoder.cache);
  ctx->geocoder =
      std::make_unique<Geocoder>(c.geocoder_options(), make_geocode_transport(c), ctx->cache);
  ctx->resolver = std::make_unique<Resolver>(ctx->index, ctx->stopwords, *ctx->geocoder,
                                             c.resolve_options());
  if (!c.resolve.keywords.empty()) ctx->keywords = KeywordSet::load(c.resolve.keywords);
  return ctx;
}

PipelineOptions pipeline_options(const Config& c) {
  PipelineOptions p;
  p.workers = c.resolve.workers;
  p.preserve_order = c.resolve.preserve_order;
  return p;
}

int cmd_resolve(Config& c, const Args& a) {
  auto ctx = make_context(c);
  CorpusReader reader(a.in, ctx->keywords.empty() ? nullptr : &ctx->keywords);
  std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + a.out);
  const auto result = run_resolve_pipeline(reader, *ctx->resolver, out, pipeline_options(c));
  out.close();
  if (!out) throw std::runtime_error("failed writing " + a.out);

  const auto summary_path = a.summary.empty() ? a.out + ".summary.json" : a.summary;
  std::ofstream summary(summary_path, std::ios::trunc);
  summary << summary_json(result).dump(2) << '\n';
  if (!summary) throw std::runtime_error("failed writing " + summary_path);
  log::info("resolve finished", {{"records", result.records_written},
                                 {"seconds", result.seconds},
                                 {"network_requests", result.geocoder.network_requests}});
  return 0;
}

int cmd_evaluate(Config& c, const Args& a) {
  std::vector<GeoRecord> records;
  if (!a.geo.empty()) {
    std::ifstream in(a.geo);
    if (!in) throw std::runtime_error("cannot read " + a.geo);
    records = read_records(in);
  } else {
    auto ctx = make_context(c);
    CorpusReader reader(a.in, ctx->keywords.empty() ? nullptr : &ctx->keywords);
    std::stringstream buffer;
    run_resolve_pipeline(reader, *ctx->resolver, buffer, pipeline_options(c));
    records = read_records(buffer);
  }
  const auto report = evaluate(records, c.eval.n, c.eval.seed);
  if (a.out.empty()) {
    std::cout << report.to_csv();
  } else {
    std::ofstream out(a.out, std::ios::trunc);
    out << report.to_csv();
    if (!out) throw std::runtime_error("failed writing " + a.out);
    std::cout << report.to_table();
  }
  return 0;
}

int cmd_stats(Config& c, const Args& a) {
  std::unordered_map<std::uint64_t, GeoRecord> by_id;
  if (!a.geo.empty()) {
    std::ifstream in(a.geo);
    if (!in) throw std::runtime_error("cannot read " + a.geo);
    for (auto& r : read_records(in)) by_id.emplace(r.tweet_id, std::move(r));
  }
  CorpusSummary summary(c.stats_priority());
  CorpusReader reader(a.in);
  while (auto t = reader.next()) {
    const auto it = by_id.find(t->tweet_id);
    summary.add(*t, it == by_id.end() ? nullptr : &it->second);
  }
  StatsReportOptions opts;
  opts.country_thresholds = c.stats.country_thresholds;
  opts.city_thresholds = c.stats.city_thresholds;
  opts.top_n = c.stats.top_n;
  const auto files = write_stats_reports(summary, a.out_dir, opts);
  log::info("stats written", {{"dir", a.out_dir}, {"files", files.size()},
                              {"tweets", summary.total_tweets()}});
  return 0;
}

int cmd_hydrate(Config& c, const Args& a) {
  auto options = c.hydrate_options();
  const char* token = std::getenv(kBearerTokenEnv);
  if (!token || !*token)
    throw ConfigError(std::string("missing credentials: set ") + kBearerTokenEnv);
  options.bearer_token = token;
  Hydrator hydrator(options, std::make_shared<HttpTransport>());
  const auto stats = hydrator.run({a.ids, a.out, a.missing, a.checkpoint});
  nlohmann::ordered_json j = {{"ids_read", stats.ids_read},
                              {"malformed_lines", stats.malformed_lines},
                              {"duplicate_ids", stats.duplicate_ids},
                              {"batches_total", stats.batches_total},
                              {"batches_resumed", stats.batches_resumed},
                              {"requests", stats.requests},
                              {"records_written", stats.records_written},
                              {"missing", stats.missing}};
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_build_index(Config& c, const Args& a) {
  if (c.gazetteer.csv.empty()) throw ConfigError("build-index needs --gazetteer <csv>");
  const auto index = GazetteerIndex::from_csv(c.gazetteer.csv);
  if (!a.out.empty()) index.save_snapshot(a.out);
  nlohmann::ordered_json j = {{"raw_count", index.raw_count()},
                              {"entry_count", index.entry_count()}};
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_cache(Config& c, const Args& a) {
  if (c.geocoder.cache.empty()) throw ConfigError("cache needs --cache <path>");
  GeocodeCache cache(c.geocoder.cache);
  if (a.cache_action == "compact") {
    cache.compact();
  } else if (a.cache_action == "import") {
    if (c.geocoder.fixtures.empty()) throw ConfigError("cache import needs --fixtures <path>");
    RecordedTransport recorded(c.geocoder.fixtures);
    for (const auto& [k, body] : recorded.successful())
      if (!cache.get(k)) cache.put(k, body);
  }
  std::uint64_t search = 0, reverse = 0;
  for (const auto& [k, v] : cache.entries()) (k.rfind("search|", 0) == 0 ? search : reverse)++;
  nlohmann::ordered_json j = {{"path", c.geocoder.cache},
                              {"entries", cache.size()},
                              {"search", search},
                              {"reverse", reverse},
                              {"lines_loaded", cache.lines_loaded()},
                              {"lines_skipped", cache.lines_skipped()}};
  std::cout << j.dump() << '\n';
  return 0;
}

void add_gazetteer_flags(CLI::App* app, Config& c) {
  app->add_option("--gazetteer", c.gazetteer.csv, "gazetteer.csv: location-name CSV");
  app->add_option("--gazetteer-snapshot", c.gazetteer.snapshot,
                  "gazetteer.snapshot: binary index snapshot (preferred when present)");
}

void add_resolver_flags(CLI::App* app, Config& c, Args& a) {
  add_gazetteer_flags(app, c);
  app->add_option("--stopwords", c.toponym.stopwords, "toponym.stopwords: stop-word list");
  app->add_option("--unwrap-hashtags", c.toponym.unwrap_hashtags,
                  "toponym.unwrap_hashtags: keep hashtag bodies as words (true|false)");
  app->add_option("--cache", c.geocoder.cache, "geocoder.cache: persistent response cache");
  app->add_option("--fixtures", c.geocoder.fixtures,
                  "geocoder.fixtures: serve recorded responses instead of HTTP");
  app->add_option("--endpoint", a.endpoints, "geocoder.endpoints: Nominatim base URL (repeatable)");
  app->add_option("--qps", a.qps, "per-endpoint ceiling for --endpoint URLs")->check(CLI::PositiveNumber);
  app->add_option("--user-agent", c.geocoder.user_agent, "geocoder.user_agent");
  app->add_option("--accept-language", c.geocoder.accept_language, "geocoder.accept_language");
  app->add_option("--max-in-flight", c.geocoder.max_in_flight, "geocoder.max_in_flight");
  app->add_option("--backoff-ms", c.geocoder.backoff_ms, "geocoder.backoff_ms: retry delays")
      ->delimiter(',');
  app->add_option("--timeout-ms", c.geocoder.timeout_ms, "geocoder.timeout_ms");
  app->add_option("--workers", c.resolve.workers, "resolve.workers: 0 = CPU count");
  app->add_option("--majority-vote", c.resolve.majority_vote,
                  "resolve.majority_vote: fuse text toponyms by country vote (true|false)");
  app->add_option("--dedup-phrases", c.resolve.dedup_phrases,
                  "resolve.dedup_phrases: each distinct phrase votes once (true|false)");
  app->add_option("--preserve-order", c.resolve.preserve_order,
                  "resolve.preserve_order: output in input order (true|false)");
  app->add_option("--keywords", c.resolve.keywords, "resolve.keywords: keep matching tweets only");
}

}  // namespace

int run_cli(int argc, char** argv) {
  Config config;
  Args args;
  const auto config_path = find_config_flag(argc, argv);
  try {
    if (!config_path.empty()) config = Config::load(config_path);
  } catch (const ConfigError& e) {
    log::error(e.what(), {{"exit_code", 2}});
    return 2;
  }

  CLI::App app{"Geolocation inference for social-media corpora"};
  app.require_subcommand(1);
  app.add_option("--config", args.config_path, "JSON configuration file");
  app.add_option("--log-level", config.log_level, "log_level: debug|info|warn|error|off");

  auto* resolve = app.add_subcommand("resolve", "Resolve tweets into GeoRecords");
  resolve->add_option("--in", args.in, "Corpus (JSONL, optionally gzip; '-' = stdin)")->required();
  resolve->add_option("--out", args.out, "GeoRecord JSONL output")->required();
  resolve->add_option("--summary", args.summary, "Summary sidecar (default <out>.summary.json)");
  add_resolver_flags(resolve, config, args);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Accuracy of text-derived locations vs GPS");
  auto* eval_in = evaluate_cmd->add_option("--in", args.in, "Corpus to resolve and evaluate");
  evaluate_cmd->add_option("--geo", args.geo, "Evaluate an existing GeoRecord file instead")
      ->excludes(eval_in);
  evaluate_cmd->add_option("-n", config.eval.n, "eval.n: sample size")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--seed", config.eval.seed, "eval.seed: sampling seed");
  evaluate_cmd->add_option("--out", args.out, "CSV report path (default: CSV on stdout)");
  add_resolver_flags(evaluate_cmd, config, args);

  auto* stats = app.add_subcommand("stats", "Corpus statistics reports");
  stats->add_option("--in", args.in, "Corpus (JSONL)")->required();
  stats->add_option("--geo", args.geo, "GeoRecord JSONL from `resolve`");
  stats->add_option("--out-dir", args.out_dir, "Report directory")->required();
  stats->add_option("--country-thresholds", config.stats.country_thresholds,
                    "stats.country_thresholds")->delimiter(',');
  stats->add_option("--city-thresholds", config.stats.city_thresholds, "stats.city_thresholds")
      ->delimiter(',');
  stats->add_option("--top-n", config.stats.top_n, "stats.top_n")->check(CLI::PositiveNumber);
  stats->add_option("--priority", config.stats.priority, "stats.priority: slot order")
      ->delimiter(',');

  auto* hydrate = app.add_subcommand("hydrate", "Rehydrate tweet ids via batch lookup");
  hydrate->add_option("--ids", args.ids, "Id list, one per line")->required();
  hydrate->add_option("--out", args.out, "Hydrated JSONL output")->required();
  hydrate->add_option("--missing", args.missing, "Missing ids (default <out dir>/missing_ids.txt)");
  hydrate->add_option("--checkpoint", args.checkpoint, "Checkpoint (default <out>.checkpoint)");
  hydrate->add_option("--base-url", config.hydrate.base_url, "hydrate.base_url");
  hydrate->add_option("--batch-size", config.hydrate.batch_size, "hydrate.batch_size (<= 100)");
  hydrate->add_option("--max-requests", config.hydrate.max_requests,
                      "hydrate.max_requests per period");
  hydrate->add_option("--period-ms", config.hydrate.period_ms, "hydrate.period_ms");
  hydrate->add_option("--in-flight", config.hydrate.max_in_flight, "hydrate.max_in_flight");

  auto* build_index = app.add_subcommand("build-index", "Build a gazetteer snapshot");
  add_gazetteer_flags(build_index, config);
  build_index->add_option("--out", args.out, "Snapshot output path");

  auto* cache = app.add_subcommand("cache", "Inspect, compact or seed the geocode cache");
  cache->add_option("action", args.cache_action, "inspect | compact | import")
      ->check(CLI::IsMember({"inspect", "compact", "import"}))
      ->required();
  cache->add_option("--cache", config.geocoder.cache, "geocoder.cache");
  cache->add_option("--fixtures", config.geocoder.fixtures, "geocoder.fixtures (for import)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    log::error(e.what(), {{"exit_code", 2}});
    return 2;
  }

  try {
    log::set_level(parse_level(config.log_level));
    apply_endpoint_flags(config, args);
    if (resolve->parsed()) return cmd_resolve(config, args);
    if (evaluate_cmd->parsed()) {
      if (args.in.empty() && args.geo.empty()) throw ConfigError("evaluate needs --in or --geo");
      return cmd_evaluate(config, args);
    }
    if (stats->parsed()) return cmd_stats(config, args);
    if (hydrate->parsed()) return cmd_hydrate(config, args);
    if (build_index->parsed()) return cmd_build_index(config, args);
    if (cache->parsed()) return cmd_cache(config, args);
  } catch (const ConfigError& e) {
    log::error(e.what(), {{"exit_code", 2}});
    return 2;
  } catch (const std::exception& e) {
    log::error(e.what(), {{"exit_code", 1}});
    return 1;
  }
  return 2;
}

}  // namespace geocov
