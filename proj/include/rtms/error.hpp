#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rtms {

// Every error the engine raises derives from Error and carries a stable
// machine-readable kind, which the CLI prints alongside the message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("parse_error", "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class OrderingError : public Error {
 public:
  explicit OrderingError(const std::string& message) : Error("ordering_error", message) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& message)
      : Error("insufficient_data", message) {}
};

class InsufficientBaselineError : public Error {
 public:
  explicit InsufficientBaselineError(const std::string& message)
      : Error("insufficient_baseline", message) {}
};

class DegenerateBaselineError : public Error {
 public:
  explicit DegenerateBaselineError(const std::string& message)
      : Error("degenerate_baseline", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config_error", message) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& message) : Error("protocol_error", message) {}
};

class LoadError : public Error {
 public:
  explicit LoadError(const std::string& message) : Error("load_error", message) {}
};

class SpecError : public Error {
 public:
  explicit SpecError(const std::string& message) : Error("spec_error", message) {}
};

class StatsError : public Error {
 public:
  explicit StatsError(const std::string& message) : Error("stats_error", message) {}
};

}  // namespace rtms
