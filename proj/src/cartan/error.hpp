#pragma once

#include <stdexcept>
#include <string>

namespace cartan {

enum class ErrorKind {
  InvalidArgument,
  OutsideDomain,
  Conditioning,
  Parse,
};

/// Single exception type thrown by the core; the C API maps `kind()` onto
/// status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Stable machine-readable tag used in CLI error records.
inline const char* error_tag(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::OutsideDomain: return "outside-domain";
    case ErrorKind::Conditioning: return "conditioning";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace cartan
