// SPDX-License-Identifier: Apache-2.0

#include "geocov/eval.hpp"

#include <algorithm>
#include <limits>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

#include "geocov/log.hpp"

namespace geocov {
namespace {

// Uniform integer in [0, bound) from raw engine output; portable across
// standard library implementations, unlike uniform_int_distribution.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

const ResolvedPlace* derived_for(const GeoRecord& r, TextSource s) {
  const auto& slot = s == TextSource::kUserLocation ? r.user_location : r.tweet_locations;
  return slot ? &*slot : nullptr;
}

}  // namespace

const char* text_source_name(TextSource source) {
  return source == TextSource::kUserLocation ? "user_location" : "tweet_content";
}

bool match_at_level(const ResolvedPlace& derived, const ResolvedPlace& truth, Level level) {
  const auto& a = derived.slot(level);
  const auto& b = truth.slot(level);
  return !a.empty() && !b.empty() && a == b;
}

bool qualifies_for_eval(const GeoRecord& r) {
  return r.geo && r.user_location && r.tweet_locations;
}

EvalSample sample_eval_set(const std::vector<GeoRecord>& corpus, std::size_t n,
                           std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (qualifies_for_eval(corpus[i])) eligible.push_back(i);

  EvalSample out;
  out.qualifying = eligible.size();
  if (eligible.size() <= n) {
    out.short_of_target = eligible.size() < n;
    if (out.short_of_target)
      log::warn("fewer qualifying tweets than requested",
                {{"requested", n}, {"qualifying", eligible.size()}});
  } else {
    // Partial Fisher-Yates: the first n slots become the sample.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = i + bounded(rng, eligible.size() - i);
      std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(n);
    std::sort(eligible.begin(), eligible.end());
  }
  out.records.reserve(eligible.size());
  for (const auto i : eligible) out.records.push_back(corpus[i]);
  return out;
}

EvalReport score(const std::vector<GeoRecord>& sample) {
  EvalReport report;
  for (const auto& r : sample) {
    if (!r.geo) continue;
    for (const auto source : kTextSources) {
      const auto* derived = derived_for(r, source);
      if (!derived) continue;
      for (const auto level : kAllLevels) {
        auto& cell = report.cell(source, level);
        ++cell.samples;
        if (match_at_level(*derived, *r.geo, level)) ++cell.matches;
      }
    }
  }
  return report;
}

EvalReport evaluate(const std::vector<GeoRecord>& corpus, std::size_t n, std::uint64_t seed) {
  const auto sample = sample_eval_set(corpus, n, seed);
  if (sample.records.empty())
    throw std::runtime_error("no tweets qualify for evaluation (need GPS plus both text sources)");
  return score(sample.records);
}

std::string EvalReport::to_csv() const {
  std::string out = "source,level,matches,samples,accuracy\n";
  char buf[128];
  for (const auto source : kTextSources) {
    for (const auto level : kAllLevels) {
      const auto& c = cell(source, level);
      std::snprintf(buf, sizeof buf, "%s,%s,%llu,%llu,%.4f\n", text_source_name(source),
                    level_name(level), static_cast<unsigned long long>(c.matches),
                    static_cast<unsigned long long>(c.samples), c.accuracy());
      out += buf;
    }
  }
  return out;
}

std::string EvalReport::to_table() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %8s %8s %8s %8s %8s\n", "Tweet field", "Country", "State",
                "County", "City", "n");
  out += buf;
  for (const auto source : kTextSources) {
    const char* label = source == TextSource::kUserLocation ? "User location" : "Tweet content";
    std::snprintf(buf, sizeof buf, "%-16s %8.2f %8.2f %8.2f %8.2f %8llu\n", label,
                  cell(source, Level::kCountry).accuracy(), cell(source, Level::kState).accuracy(),
                  cell(source, Level::kCounty).accuracy(), cell(source, Level::kCity).accuracy(),
                  static_cast<unsigned long long>(cell(source, Level::kCountry).samples));
    out += buf;
  }
  return out;
}

}  // namespace geocov
