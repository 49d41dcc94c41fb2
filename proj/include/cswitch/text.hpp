#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cswitch {

// Splits on runs of ASCII whitespace. Never returns empty tokens.
std::vector<std::string> split_ws(std::string_view text);

// Splits on a single separator character; keeps empty fields out.
std::vector<std::string> split_char(std::string_view text, char sep);

std::string join(const std::vector<std::string>& tokens, std::string_view sep);

std::string lower_ascii(std::string_view s);

// True when the first byte is an ASCII uppercase letter.
bool starts_upper_ascii(std::string_view s);

// Uppercases the first byte if it is an ASCII lowercase letter.
std::string capitalize_ascii(std::string s);

// Multiword lexicon entries carry '_' between words; corpora use spaces.
std::string underscores_to_spaces(std::string s);

// Decodes UTF-8 into codepoints. Invalid bytes are kept as single
// codepoints in the 0xDC80..0xDCFF range so that distinct inputs stay
// distinct.
std::u32string utf8_codepoints(std::string_view s);

}  // namespace cswitch
