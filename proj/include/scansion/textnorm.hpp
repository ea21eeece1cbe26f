#ifndef SCANSION_TEXTNORM_HPP
#define SCANSION_TEXTNORM_HPP

#include <string>
#include <string_view>
#include <vector>

namespace scansion {

// UTF-8 <-> codepoint helpers. Invalid bytes decode to U+FFFD.
std::vector<char32_t> utf8_decode(std::string_view text);
std::string utf8_encode(const std::vector<char32_t>& codepoints);
std::size_t utf8_length(std::string_view text);
// First k / last k codepoints of `text` (whole string when shorter).
std::string utf8_prefix(std::string_view text, std::size_t k);
std::string utf8_suffix(std::string_view text, std::size_t k);

// Replaces long s (U+017F) with "s" and rotunda r (U+A75B) with "r", then
// brings the result into canonical composed form (NFC). Total and idempotent.
std::string normalize_text(std::string_view raw);

// Splits one verse line into tokens: whitespace-separated, with leading and
// trailing punctuation peeled off as separate tokens. Apostrophes that touch
// a letter stay attached to their word ("despair'", "'tis").
std::vector<std::string> tokenize_line(std::string_view text);

// Drops tokens that consist only of punctuation; word-internal apostrophes
// are untouched.
std::vector<std::string> strip_punctuation(const std::vector<std::string>& tokens);

bool is_punctuation_codepoint(char32_t cp);
bool is_punctuation_token(std::string_view token);

} // namespace scansion

#endif
