#pragma once

#include <stdexcept>
#include <string>

namespace tokbench {

/// Coarse failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
  invalid_argument,  // bad parameter or precondition violation
  config,            // bad pipeline configuration / usage
  malformed_row,
  invalid_label,
  encoding,
  duplicate_entry,
  parse,
  unencodable,
  io,
  internal,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::config: return "config";
    case ErrorKind::malformed_row: return "malformed-row";
    case ErrorKind::invalid_label: return "invalid-label";
    case ErrorKind::encoding: return "encoding";
    case ErrorKind::duplicate_entry: return "duplicate-entry";
    case ErrorKind::parse: return "parse";
    case ErrorKind::unencodable: return "unencodable";
    case ErrorKind::io: return "io";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace tokbench
