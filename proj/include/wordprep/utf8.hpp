#pragma once

#include <string>
#include <string_view>

namespace wordprep {

/// Decodes UTF-8 to Unicode scalar values. Invalid sequences decode to
/// U+FFFD, one replacement per offending byte.
std::u32string decode_utf8(std::string_view s);

/// Encodes scalar values back to UTF-8.
std::string encode_utf8(const std::u32string& s);

/// Simple (unconditional, locale-free) lowercase of one scalar value.
/// Covers ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic; anything
/// else passes through unchanged.
char32_t simple_lower(char32_t c);

}  // namespace wordprep
