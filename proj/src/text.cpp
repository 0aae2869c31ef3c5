#include "tweetorigin/text.hpp"

#include <cctype>

namespace tweetorigin {

namespace {

bool is_space_byte(unsigned char c) { return std::isspace(c) != 0; }

bool is_punct_byte(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

}  // namespace

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space_byte(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space_byte(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::uint32_t decode_utf8(std::string_view s, std::size_t pos, std::size_t* len) {
  const auto byte = [&](std::size_t i) -> std::uint32_t {
    return static_cast<unsigned char>(s[i]);
  };
  const std::uint32_t b0 = byte(pos);
  std::size_t need = 0;
  std::uint32_t cp = 0;
  if (b0 < 0x80) {
    *len = 1;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    need = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3;
    cp = b0 & 0x07;
  } else {
    *len = 1;
    return 0xFFFD;
  }
  if (pos + need >= s.size()) {
    *len = 1;
    return 0xFFFD;
  }
  for (std::size_t i = 1; i <= need; ++i) {
    const std::uint32_t b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      *len = 1;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  *len = need + 1;
  return cp;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t len = 1;
    decode_utf8(s, i, &len);
    i += len;
    ++n;
  }
  return n;
}

std::string utf8_prefix(std::string_view s, std::size_t max_chars) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < s.size() && n < max_chars) {
    std::size_t len = 1;
    decode_utf8(s, i, &len);
    i += len;
    ++n;
  }
  return std::string(s.substr(0, i));
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    std::size_t word_begin = i;
    while (i < n && !is_space_byte(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t b = word_begin;
    std::size_t e = i;
    while (b < e && is_punct_byte(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && is_punct_byte(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b >= e) continue;
    Token t;
    t.begin = b;
    t.end = e;
    t.norm.reserve(e - b);
    for (std::size_t k = b; k < e; ++k) {
      const char c = text[k];
      if (is_punct_byte(static_cast<unsigned char>(c))) continue;
      if (c >= 'A' && c <= 'Z') {
        t.norm.push_back(static_cast<char>(c - 'A' + 'a'));
      } else {
        t.norm.push_back(c);
      }
    }
    if (!t.norm.empty()) tokens.push_back(std::move(t));
  }
  return tokens;
}

std::string normalize_phrase(std::string_view text) {
  std::string out;
  for (const Token& t : tokenize(text)) {
    if (!out.empty()) out.push_back(' ');
    out += t.norm;
  }
  return out;
}

}  // namespace tweetorigin
