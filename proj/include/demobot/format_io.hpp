#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "demobot/errors.hpp"

namespace demobot {

// Shortest round-trip decimal form (std::to_chars with no precision), so
// write -> read -> write is byte-identical.
inline void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

inline void append_number(std::string& out, long long v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

// Whitespace tokenizer with typed consumption and positional error messages.
class TokenReader {
 public:
  TokenReader(std::string_view text, std::string context)
      : text_(text), context_(std::move(context)) {}

  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }

  std::string_view token() {
    skip_ws();
    if (pos_ >= text_.size()) throw ConfigError(context_ + ": unexpected end of input");
    const size_t start = pos_;
    while (pos_ < text_.size() && !is_ws(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  double number() {
    const std::string_view t = token();
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
      throw ConfigError(context_ + ": bad number '" + std::string(t) + "'");
    return v;
  }

  long long integer() {
    const std::string_view t = token();
    long long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
      throw ConfigError(context_ + ": bad integer '" + std::string(t) + "'");
    return v;
  }

  void expect(std::string_view literal) {
    const std::string_view t = token();
    if (t != literal)
      throw ConfigError(context_ + ": expected '" + std::string(literal) + "', got '" +
                        std::string(t) + "'");
  }

 private:
  static bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
  void skip_ws() {
    while (pos_ < text_.size() && is_ws(text_[pos_])) ++pos_;
  }

  std::string_view text_;
  std::string context_;
  size_t pos_ = 0;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::vector<std::string> split_lines(const std::string& text);

}  // namespace demobot
