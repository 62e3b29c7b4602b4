// SPDX-License-Identifier: Apache-2.0

#include "geocov/toponym.hpp"

#include <fstream>
#include <stdexcept>

#include "geocov/unicode.hpp"

namespace geocov {
namespace {

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

bool is_url(std::string_view raw) {
  return starts_with_ci(raw, "http://") || starts_with_ci(raw, "https://") ||
         starts_with_ci(raw, "www.");
}

}  // namespace

StopWords::StopWords(std::unordered_set<std::string> words) : words_(std::move(words)) {}

StopWords StopWords::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read stop-word list: " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = normalize(line);
    if (!w.empty()) words.insert(std::move(w));
  }
  return StopWords(std::move(words));
}

StopWords StopWords::without(const std::string& word) const {
  auto copy = words_;
  copy.erase(word);
  return StopWords(std::move(copy));
}

TokenStream preprocess(std::string_view text, const PreprocessOptions& options) {
  TokenStream tokens;
  for (const auto raw : unicode::split_whitespace(text)) {
    if (is_url(raw) || raw.front() == '@' || raw == "RT" ||
        (raw.front() == '#' && !options.unwrap_hashtags)) {
      tokens.emplace_back(kNoiseToken);
      continue;
    }
    const auto body = unicode::trim_non_word(raw);
    if (body.empty() || body == "RT" || unicode::is_numeric(body)) {
      tokens.emplace_back(kNoiseToken);
      continue;
    }
    tokens.push_back(unicode::lower_nfc(body));
  }
  return tokens;
}

std::vector<ToponymCandidate> generate_candidates(const TokenStream& tokens) {
  std::vector<ToponymCandidate> out;
  out.reserve(tokens.size() * 2);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == kNoiseToken) continue;
    out.push_back({tokens[i], 1, i});
    if (i + 1 < tokens.size() && tokens[i + 1] != kNoiseToken)
      out.push_back({tokens[i] + ' ' + tokens[i + 1], 2, i});
  }
  return out;
}

std::vector<ToponymCandidate> prune(std::vector<ToponymCandidate> candidates,
                                    const GazetteerIndex& index, const StopWords& stopwords) {
  std::erase_if(candidates, [&](const ToponymCandidate& c) {
    return stopwords.contains(c.phrase) || !index.contains_normalized(c.phrase);
  });
  return candidates;
}

std::vector<ToponymCandidate> extract_toponyms(std::string_view text, const GazetteerIndex& index,
                                               const StopWords& stopwords,
                                               const PreprocessOptions& options) {
  return prune(generate_candidates(preprocess(text, options)), index, stopwords);
}

}  // namespace geocov
