// SPDX-License-Identifier: Apache-2.0
//
// Gazetteer-based toponym extraction over free text:
//   preprocess -> uni/bi-gram candidates -> stop-word and gazetteer pruning.
// Stop-words are removed after bi-grams are formed, so "new york" survives a
// stop-list that contains "new".

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "geocov/gazetteer.hpp"

namespace geocov {

inline constexpr std::string_view kNoiseToken = "<noise>";

using TokenStream = std::vector<std::string>;

struct ToponymCandidate {
  std::string phrase;
  int arity = 1;             // 1 = uni-gram, 2 = bi-gram
  std::size_t position = 0;  // index of the first token

  friend bool operator==(const ToponymCandidate&, const ToponymCandidate&) = default;
};

struct PreprocessOptions {
  /// "#Italy" -> "italy" when set; otherwise the hashtag is a noise token.
  bool unwrap_hashtags = true;
};

class StopWords {
 public:
  StopWords() = default;
  explicit StopWords(std::unordered_set<std::string> words);
  static StopWords load(const std::filesystem::path& path);

  bool contains(const std::string& phrase) const { return words_.count(phrase) != 0; }
  std::size_t size() const { return words_.size(); }
  StopWords without(const std::string& word) const;

 private:
  std::unordered_set<std::string> words_;
};

TokenStream preprocess(std::string_view text, const PreprocessOptions& options = {});

/// Uni-grams and adjacent noise-free bi-grams, ordered by (position, arity).
std::vector<ToponymCandidate> generate_candidates(const TokenStream& tokens);

std::vector<ToponymCandidate> prune(std::vector<ToponymCandidate> candidates,
                                    const GazetteerIndex& index, const StopWords& stopwords);

std::vector<ToponymCandidate> extract_toponyms(std::string_view text, const GazetteerIndex& index,
                                               const StopWords& stopwords,
                                               const PreprocessOptions& options = {});

}  // namespace geocov
