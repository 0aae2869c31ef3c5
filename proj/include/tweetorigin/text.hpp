#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tweetorigin {

std::string trim(std::string_view s);
std::string lower_ascii(std::string_view s);

// True for a nonempty string consisting solely of ASCII digits.
bool all_digits(std::string_view s);

std::size_t utf8_length(std::string_view s);
std::string utf8_prefix(std::string_view s, std::size_t max_chars);

// Decodes the codepoint starting at `pos`; stores the byte length in `len`.
// Invalid bytes decode as U+FFFD with length 1.
std::uint32_t decode_utf8(std::string_view s, std::size_t pos, std::size_t* len);
void append_utf8(std::string& out, std::uint32_t cp);

/// One whitespace-delimited word of a query or tweet. [begin,end) brackets
/// the word body in the original text with leading/trailing punctuation
/// (including '#' and '@') stripped; `norm` is the lowercased body with the
/// remaining punctuation removed. Words that normalize to nothing are dropped.
struct Token {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string norm;
};

std::vector<Token> tokenize(std::string_view text);

// Lowercased, punctuation-free tokens joined by single spaces.
std::string normalize_phrase(std::string_view text);

}  // namespace tweetorigin
