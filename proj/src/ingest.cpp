// SPDX-License-Identifier: Apache-2.0

#include "geocov/ingest.hpp"

#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "geocov/unicode.hpp"

namespace geocov {

IngestStats& IngestStats::operator+=(const IngestStats& other) {
  lines_read += other.lines_read;
  parsed_ok += other.parsed_ok;
  skipped_malformed += other.skipped_malformed;
  filtered_out += other.filtered_out;
  return *this;
}

KeywordSet::KeywordSet(std::unordered_set<std::string> keywords)
    : keywords_(std::move(keywords)) {
  for (const auto& k : keywords_)
    max_words_ = std::max(max_words_, unicode::split_whitespace(k).size());
}

KeywordSet KeywordSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read keyword list: " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view v = line;
    if (!v.empty() && v.front() == '#') v.remove_prefix(1);
    const auto pieces = unicode::split_whitespace(v);
    if (pieces.empty()) continue;
    std::string joined;
    for (const auto& p : pieces) {
      if (!joined.empty()) joined += ' ';
      joined += p;
    }
    words.insert(unicode::lower_nfc(joined));
  }
  return KeywordSet(std::move(words));
}

bool matches_keywords(const RawTweet& tweet, const KeywordSet& keywords) {
  if (keywords.empty()) return false;
  std::vector<std::string> tokens;
  for (const auto raw : unicode::split_whitespace(tweet.text)) {
    const auto body = unicode::trim_non_word(raw);
    if (!body.empty()) tokens.push_back(unicode::lower_nfc(body));
  }
  const auto max_words = keywords.max_words();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string phrase = tokens[i];
    if (keywords.contains(phrase)) return true;
    for (std::size_t n = 2; n <= max_words && i + n - 1 < tokens.size(); ++n) {
      phrase += ' ';
      phrase += tokens[i + n - 1];
      if (keywords.contains(phrase)) return true;
    }
  }
  return false;
}

struct LineReader::Impl {
  gzFile file = nullptr;
  std::vector<char> buf = std::vector<char>(1 << 16);
  std::size_t pos = 0;
  std::size_t len = 0;
  bool eof = false;

  ~Impl() {
    if (file) gzclose(file);
  }

  bool fill() {
    const int n = gzread(file, buf.data(), static_cast<unsigned>(buf.size()));
    if (n < 0) {
      int errnum = 0;
      const char* msg = gzerror(file, &errnum);
      throw std::runtime_error(std::string("read error: ") + msg);
    }
    pos = 0;
    len = static_cast<std::size_t>(n);
    if (n == 0) eof = true;
    return n > 0;
  }
};

LineReader::LineReader(const std::string& source) : impl_(std::make_unique<Impl>()) {
  if (source == "-") {
    impl_->file = gzdopen(dup(0), "rb");
  } else {
    impl_->file = gzopen(source.c_str(), "rb");
  }
  if (!impl_->file)
    throw std::runtime_error("cannot open corpus source '" + source + "': " +
                             std::strerror(errno));
  gzbuffer(impl_->file, 1 << 17);
}

LineReader::~LineReader() = default;

bool LineReader::next(std::string& line) {
  line.clear();
  auto& s = *impl_;
  bool any = false;
  while (true) {
    if (s.pos == s.len) {
      if (s.eof || !s.fill()) return any;
    }
    const char* begin = s.buf.data() + s.pos;
    const char* end = s.buf.data() + s.len;
    const char* nl = static_cast<const char*>(std::memchr(begin, '\n', end - begin));
    any = true;
    if (nl) {
      line.append(begin, nl);
      s.pos += static_cast<std::size_t>(nl - begin) + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    line.append(begin, end);
    s.pos = s.len;
  }
}

CorpusReader::CorpusReader(const std::string& source, const KeywordSet* filter)
    : lines_(source), filter_(filter) {}

std::optional<RawTweet> CorpusReader::next() {
  while (lines_.next(buffer_)) {
    ++stats_.lines_read;
    auto tweet = parse_tweet(buffer_);
    if (!tweet) {
      ++stats_.skipped_malformed;
      continue;
    }
    ++stats_.parsed_ok;
    if (filter_ && !filter_->empty() && !matches_keywords(*tweet, *filter_)) {
      ++stats_.filtered_out;
      continue;
    }
    return tweet;
  }
  return std::nullopt;
}

}  // namespace geocov
