// SPDX-License-Identifier: Apache-2.0
//
// Accuracy of text-derived locations against GPS ground truth. Truth is the
// reverse-geocoded `geo` slot of the same record, so both sides share the
// address mapping vocabulary. Matching is strict normalized-string equality
// per level; a missing slot on either side is a miss.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "geocov/place.hpp"
#include "geocov/resolve.hpp"

namespace geocov {

enum class TextSource { kUserLocation, kTweetContent };
inline constexpr TextSource kTextSources[] = {TextSource::kUserLocation, TextSource::kTweetContent};
const char* text_source_name(TextSource source);

bool match_at_level(const ResolvedPlace& derived, const ResolvedPlace& truth, Level level);

/// Record has a geo slot and both text-derived slots.
bool qualifies_for_eval(const GeoRecord& record);

struct EvalSample {
  std::vector<GeoRecord> records;  // corpus order
  std::size_t qualifying = 0;
  bool short_of_target = false;    // fewer than n qualified
};

/// Seeded uniform sample (without replacement) of qualifying records.
/// Throws std::invalid_argument when n == 0.
EvalSample sample_eval_set(const std::vector<GeoRecord>& corpus, std::size_t n,
                           std::uint64_t seed);

struct EvalCell {
  std::uint64_t matches = 0;
  std::uint64_t samples = 0;
  double accuracy() const { return samples ? static_cast<double>(matches) / samples : 0.0; }
};

struct EvalReport {
  std::array<std::array<EvalCell, 4>, 2> cells{};  // [source][level]

  const EvalCell& cell(TextSource s, Level l) const {
    return cells[static_cast<int>(s)][static_cast<int>(l)];
  }
  EvalCell& cell(TextSource s, Level l) { return cells[static_cast<int>(s)][static_cast<int>(l)]; }

  /// "source,level,matches,samples,accuracy" with accuracy to 4 decimals.
  std::string to_csv() const;
  /// Two-row grid: tweet field x {country, state, county, city}.
  std::string to_table() const;
};

EvalReport score(const std::vector<GeoRecord>& sample);

/// Samples then scores; throws std::runtime_error when nothing qualifies.
EvalReport evaluate(const std::vector<GeoRecord>& corpus, std::size_t n, std::uint64_t seed);

}  // namespace geocov
