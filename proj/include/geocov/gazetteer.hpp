// SPDX-License-Identifier: Apache-2.0
//
// Immutable membership index of normalized location names. Lookup is a
// single hash probe; the index is shared read-only across workers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace geocov {

/// Lowercase + NFC, trimmed, internal whitespace collapsed to one space.
std::string normalize(std::string_view phrase);

class GazetteerIndex {
 public:
  GazetteerIndex() = default;

  /// Entries are normalized on insertion; duplicates collapse.
  static GazetteerIndex from_names(const std::vector<std::string>& names);

  /// Reads a header-row CSV. Name columns: city/name/accentcity/asciiname/
  /// city_ascii/ascii_name/alternatenames ('|' or ';' separated in the last).
  static GazetteerIndex from_csv(const std::filesystem::path& path);

  /// Binary snapshot, see README "Gazetteer snapshot layout".
  static GazetteerIndex load_snapshot(const std::filesystem::path& path);
  void save_snapshot(const std::filesystem::path& path) const;

  bool contains(std::string_view phrase) const;
  /// Skips normalization; the caller guarantees `normalized` is already normal.
  bool contains_normalized(std::string_view normalized) const;

  std::size_t entry_count() const { return entries_.size(); }
  /// Number of non-empty name cells read before deduplication.
  std::uint64_t raw_count() const { return raw_count_; }

  /// Entries in sorted order (deterministic iteration).
  std::vector<std::string> sorted_entries() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  void insert(std::string_view name);

  std::unordered_set<std::string, Hash, std::equal_to<>> entries_;
  std::uint64_t raw_count_ = 0;
};

}  // namespace geocov
