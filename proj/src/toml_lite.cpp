#include "rtms/toml_lite.hpp"

#include <cctype>
#include <charconv>

#include "rtms/error.hpp"

namespace rtms::toml_lite {

namespace {

class Cursor {
 public:
  explicit Cursor(std::istream& in) : in_(in) {}

  /// Moves to the next physical line; false at end of input.
  bool next_line() {
    if (!std::getline(in_, s_)) return false;
    ++line_;
    if (!s_.empty() && s_.back() == '\r') s_.pop_back();
    pos_ = 0;
    return true;
  }
  std::size_t line() const { return line_; }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  // Inside arrays, line breaks and comments count as whitespace.
  void skip_array_ws() {
    while (at_end_or_comment()) {
      if (!next_line()) fail("unterminated array");
    }
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  std::string key() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a key");
    return s_.substr(start, pos_ - start);
  }

  Value value() {
    skip_ws();
    Value out;
    out.line = line_;
    const char c = peek();
    if (c == '"') {
      out.v = string();
    } else if (c == '[') {
      ++pos_;
      Array arr;
      for (;;) {
        skip_array_ws();
        if (peek() == ']') {
          ++pos_;
          break;
        }
        arr.push_back(value());
        skip_array_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ']') {
          ++pos_;
          break;
        }
        fail("expected ',' or ']' in array");
      }
      out.v = std::move(arr);
    } else if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      out.v = true;
    } else if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      out.v = false;
    } else {
      out.v = number();
    }
    return out;
  }

 private:
  std::string string() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
        const char e = s_[pos_ + 1];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        pos_ += 2;
        continue;
      }
      out += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::variant<std::int64_t, double, bool, std::string, Array> number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                                s_[pos_] == '+' || s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
    }
    const std::string tok = s_.substr(start, pos_ - start);
    if (tok.empty()) fail("expected a value");
    const char* b = tok.data();
    const char* e = b + tok.size();
    if (tok.find_first_of(".eE") == std::string::npos) {
      std::int64_t i = 0;
      auto [p, ec] = std::from_chars(*b == '+' ? b + 1 : b, e, i);
      if (ec == std::errc{} && p == e) return i;
    }
    double d = 0.0;
    auto [p, ec] = std::from_chars(*b == '+' ? b + 1 : b, e, d);
    if (ec != std::errc{} || p != e) fail("bad number '" + tok + "'");
    return d;
  }

  std::istream& in_;
  std::string s_;
  std::size_t line_ = 0;
  std::size_t pos_ = 0;
};

[[noreturn]] void type_error(std::size_t line, const char* want) {
  throw ParseError(line, std::string("expected ") + want);
}

}  // namespace

double Value::as_double() const {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  type_error(line, "a number");
}

std::int64_t Value::as_int() const {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  type_error(line, "an integer");
}

const std::string& Value::as_string() const {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  type_error(line, "a string");
}

const Array& Value::as_array() const {
  if (const auto* a = std::get_if<Array>(&v)) return *a;
  type_error(line, "an array");
}

const Value* Table::find(const std::string& key) const {
  const auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

Document parse(std::istream& in) {
  Document doc;
  Table* current = &doc.root;
  Cursor cur(in);
  while (cur.next_line()) {
    const std::size_t lineno = cur.line();
    if (cur.at_end_or_comment()) continue;
    if (cur.peek() == '[') {
      cur.expect('[');
      cur.expect('[');
      const std::string name = cur.key();
      cur.expect(']');
      cur.expect(']');
      if (!cur.at_end_or_comment()) cur.fail("trailing characters after table header");
      auto& vec = doc.arrays[name];
      vec.emplace_back();
      vec.back().line = lineno;
      current = &vec.back();
      continue;
    }
    const std::string key = cur.key();
    cur.expect('=');
    Value v = cur.value();
    if (!cur.at_end_or_comment()) cur.fail("trailing characters after value");
    if (current->entries.count(key)) cur.fail("duplicate key '" + key + "'");
    current->entries.emplace(key, std::move(v));
  }
  return doc;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace rtms::toml_lite
