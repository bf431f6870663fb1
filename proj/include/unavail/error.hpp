#pragma once

#include <stdexcept>
#include <string>

namespace unavail {

enum class ErrorKind {
  InvalidInput,
  MissingPool,
  Parse,
  Fetch,
  Auth,
  Stats,
  Usage,
  Io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::MissingPool: return "MissingPool";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Fetch: return "FetchError";
    case ErrorKind::Auth: return "AuthError";
    case ErrorKind::Stats: return "StatsError";
    case ErrorKind::Usage: return "UsageError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

// Base of every error the library raises. The kind survives re-throwing with
// added context, which is what the CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& w) : Error(ErrorKind::InvalidInput, w) {}
};

struct MissingPool : Error {
  explicit MissingPool(const std::string& w) : Error(ErrorKind::MissingPool, w) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& location, const std::string& w)
      : Error(ErrorKind::Parse, location.empty() ? w : location + ": " + w),
        location_(location) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

struct FetchError : Error {
  explicit FetchError(const std::string& w) : Error(ErrorKind::Fetch, w) {}
};

struct AuthError : Error {
  explicit AuthError(const std::string& w) : Error(ErrorKind::Auth, w) {}
};

struct StatsError : Error {
  explicit StatsError(const std::string& w) : Error(ErrorKind::Stats, w) {}
};

struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error(ErrorKind::Usage, w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::Io, w) {}
};

}  // namespace unavail
