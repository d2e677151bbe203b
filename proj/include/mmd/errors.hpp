#pragma once

#include <stdexcept>
#include <string>

namespace mmd {

enum class ErrorKind {
  Admissibility,
  RejectedRadius,
  UnsupportedBackend,
  Unsupported,
  Resource,
  Bracket,
  EmptyApproximation,
  Validation,
  Io,
};

const char* to_string(ErrorKind kind);

/// Base exception for every failure the library reports. The kind drives the
/// CLI exit code.
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

}  // namespace mmd
