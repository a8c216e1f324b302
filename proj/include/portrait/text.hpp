#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace portrait::text {

// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD, one per
// offending byte, so decoding never fails.
std::vector<char32_t> decode_utf8(std::string_view s);

void append_utf8(std::string& out, char32_t cp);

// Lowercases ASCII, Latin-1 Supplement and Latin Extended-A letters.
char32_t to_lower(char32_t cp);

// Maps accented Latin letters onto their base letter (á -> a, ñ -> n, ü -> u).
// Expects an already lowercased code point.
char32_t strip_accent(char32_t cp);

// Letters, digits, underscore and anything non-ASCII that is not a known
// punctuation or symbol block.
bool is_word_char(char32_t cp);

// Lowercase + accent strip, the form used for matching.
std::string normalize(std::string_view s);

std::string to_lower_utf8(std::string_view s);

}  // namespace portrait::text
