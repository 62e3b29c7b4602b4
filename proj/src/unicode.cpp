// SPDX-License-Identifier: Apache-2.0

#include "geocov/unicode.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <stdexcept>

namespace geocov::unicode {
namespace {

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

bool is_word_code_point(UChar32 c) {
  if (c < 0) return false;
  const auto mask = U_GET_GC_MASK(c);
  return (mask & (U_GC_L_MASK | U_GC_M_MASK | U_GC_N_MASK)) != 0;
}

// Decodes the code point starting at byte offset i; advances i.
UChar32 next_code_point(std::string_view s, int32_t& i) {
  UChar32 c;
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  U8_NEXT(bytes, i, static_cast<int32_t>(s.size()), c);
  return c;
}

}  // namespace

std::string lower_nfc(std::string_view text) {
  if (is_ascii(text)) {
    std::string out(text);
    for (auto& ch : out) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    return out;
  }
  auto ustr = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  ustr.toLower(icu::Locale::getRoot());
  UErrorCode status = U_ZERO_ERROR;
  const auto* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  icu::UnicodeString composed = nfc->normalize(ustr, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
  std::string out;
  composed.toUTF8String(out);
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> pieces;
  std::size_t pos = 0;
  while (pos < text.size()) {
    pos = text.find_first_not_of(kAsciiWhitespace, pos);
    if (pos == std::string_view::npos) break;
    auto end = text.find_first_of(kAsciiWhitespace, pos);
    if (end == std::string_view::npos) end = text.size();
    pieces.push_back(text.substr(pos, end - pos));
    pos = end;
  }
  return pieces;
}

std::string_view trim_non_word(std::string_view token) {
  const auto n = static_cast<int32_t>(token.size());
  int32_t first = -1;
  int32_t last_end = 0;
  int32_t i = 0;
  while (i < n) {
    const int32_t start = i;
    const UChar32 c = next_code_point(token, i);
    if (is_word_code_point(c)) {
      if (first < 0) first = start;
      last_end = i;
    }
  }
  if (first < 0) return {};
  return token.substr(static_cast<std::size_t>(first),
                      static_cast<std::size_t>(last_end - first));
}

bool is_numeric(std::string_view token) {
  bool saw_number = false;
  const auto n = static_cast<int32_t>(token.size());
  int32_t i = 0;
  while (i < n) {
    const UChar32 c = next_code_point(token, i);
    if (c < 0) return false;
    if ((U_GET_GC_MASK(c) & U_GC_N_MASK) != 0) {
      saw_number = true;
    } else if (c >= 0x80 || std::string_view(".,:/-+%").find(static_cast<char>(c)) ==
                                std::string_view::npos) {
      return false;
    }
  }
  return saw_number;
}

bool is_valid_utf8(std::string_view text) {
  const auto n = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < n) {
    if (next_code_point(text, i) < 0) return false;
  }
  return true;
}

}  // namespace geocov::unicode
