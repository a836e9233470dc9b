#pragma once

// Reader for the small TOML subset used by the hint database and baseline
// profiles: `key = value` pairs, `[[name]]` array-of-tables headers, `#`
// comments. Values are strings, integers, floats, booleans, or flat arrays of
// those.

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace rtms::toml_lite {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::int64_t, double, bool, std::string, Array> v;
  std::size_t line = 0;

  bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
  bool is_number() const { return is_int() || std::holds_alternative<double>(v); }
  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }

  double as_double() const;
  std::int64_t as_int() const;
  const std::string& as_string() const;
  const Array& as_array() const;
};

struct Table {
  std::map<std::string, Value> entries;
  std::size_t line = 0;

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  const Value* find(const std::string& key) const;
};

struct Document {
  Table root;
  std::map<std::string, std::vector<Table>> arrays;
};

/// Throws ParseError with the offending line.
Document parse(std::istream& in);

std::string quote(const std::string& s);

}  // namespace rtms::toml_lite
