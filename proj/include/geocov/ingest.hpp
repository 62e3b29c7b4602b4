// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>

#include "geocov/tweet.hpp"

namespace geocov {

struct IngestStats {
  std::uint64_t lines_read = 0;
  std::uint64_t parsed_ok = 0;
  std::uint64_t skipped_malformed = 0;
  std::uint64_t filtered_out = 0;

  IngestStats& operator+=(const IngestStats& other);
  friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

/// Lowercase keywords; hashtags are stored without '#'. Multi-word keywords
/// match consecutive tokens.
class KeywordSet {
 public:
  KeywordSet() = default;
  explicit KeywordSet(std::unordered_set<std::string> keywords);

  static KeywordSet load(const std::filesystem::path& path);

  bool empty() const { return keywords_.empty(); }
  std::size_t size() const { return keywords_.size(); }
  bool contains(const std::string& keyword) const { return keywords_.count(keyword) != 0; }
  std::size_t max_words() const { return max_words_; }

 private:
  std::unordered_set<std::string> keywords_;
  std::size_t max_words_ = 0;
};

/// Case-insensitive token/hashtag match; substrings never match.
bool matches_keywords(const RawTweet& tweet, const KeywordSet& keywords);

/// Reads newline-delimited lines from a file, "-" (stdin), plain or gzip.
class LineReader {
 public:
  explicit LineReader(const std::string& source);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  /// Next line without its terminator; false at end of input.
  bool next(std::string& line);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Single-reader stream of RawTweet in input order. Malformed lines are
/// counted and skipped; an unreadable source throws std::runtime_error.
class CorpusReader {
 public:
  explicit CorpusReader(const std::string& source, const KeywordSet* filter = nullptr);

  std::optional<RawTweet> next();
  const IngestStats& stats() const { return stats_; }

 private:
  LineReader lines_;
  const KeywordSet* filter_;
  IngestStats stats_;
  std::string buffer_;
};

}  // namespace geocov
