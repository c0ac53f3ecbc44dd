#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tokbench/error.hpp"

namespace tokbench::utf8 {

/// Decodes one code point starting at `pos`. Returns the byte length, or 0 if
/// the sequence is invalid (overlong forms, surrogates and values above
/// U+10FFFF are rejected).
inline std::size_t decode_one(std::string_view s, std::size_t pos, char32_t& out) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    out = b0;
    return 1;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2; cp = b0 & 0x1F; min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3; cp = b0 & 0x0F; min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4; cp = b0 & 0x07; min = 0x10000;
  } else {
    return 0;
  }
  if (pos + len > s.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  out = cp;
  return len;
}

/// Byte offset of the first invalid sequence, or npos when `s` is valid.
inline std::size_t find_invalid(std::string_view s) {
  char32_t cp;
  for (std::size_t pos = 0; pos < s.size();) {
    const std::size_t len = decode_one(s, pos, cp);
    if (len == 0) return pos;
    pos += len;
  }
  return std::string_view::npos;
}

inline bool is_valid(std::string_view s) { return find_invalid(s) == std::string_view::npos; }

inline void require_valid(std::string_view s, std::string_view context) {
  const std::size_t bad = find_invalid(s);
  if (bad != std::string_view::npos) {
    fail(ErrorKind::encoding, std::string(context) + ": invalid UTF-8 at byte " +
                                  std::to_string(bad));
  }
}

inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  char32_t cp;
  for (std::size_t pos = 0; pos < s.size();) {
    const std::size_t len = decode_one(s, pos, cp);
    if (len == 0) fail(ErrorKind::encoding, "invalid UTF-8 at byte " + std::to_string(pos));
    out.push_back(cp);
    pos += len;
  }
  return out;
}

inline void append(std::string& out, char32_t cp) {
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

inline std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append(out, cp);
  return out;
}

/// Byte offsets of every code point boundary: size is length()+1, front is 0
/// and back is s.size().
inline std::vector<std::size_t> boundaries(std::string_view s) {
  std::vector<std::size_t> out;
  out.reserve(s.size() + 1);
  char32_t cp;
  std::size_t pos = 0;
  while (pos < s.size()) {
    out.push_back(pos);
    const std::size_t len = decode_one(s, pos, cp);
    if (len == 0) fail(ErrorKind::encoding, "invalid UTF-8 at byte " + std::to_string(pos));
    pos += len;
  }
  out.push_back(pos);
  return out;
}

inline std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

}  // namespace tokbench::utf8
