// SPDX-License-Identifier: Apache-2.0
//
// Small UTF-8 helpers shared by the text-processing modules. Whitespace is
// the ASCII set " \t\n\r\f\v"; "word" code points are letters, marks and
// numbers (general categories L*, M*, N*).

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace geocov::unicode {

constexpr std::string_view kAsciiWhitespace = " \t\n\r\f\v";

/// Full Unicode lowercasing (root locale) followed by NFC composition.
std::string lower_nfc(std::string_view text);

/// Splits on runs of ASCII whitespace; never yields empty pieces.
std::vector<std::string_view> split_whitespace(std::string_view text);

/// Drops leading and trailing code points that are not letters, marks or
/// numbers. Invalid UTF-8 sequences count as non-word.
std::string_view trim_non_word(std::string_view token);

/// True when every code point is a number (category N*) or one of ".,:/-+%"
/// and at least one number is present.
bool is_numeric(std::string_view token);

/// True when the byte sequence is well-formed UTF-8.
bool is_valid_utf8(std::string_view text);

}  // namespace geocov::unicode
