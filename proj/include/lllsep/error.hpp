#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lllsep {

/// Error classes surfaced by the library. The CLI maps each one to its own
/// exit code.
enum class ErrorKind {
  invalid_argument,
  parse,
  guard,
  domain,
  certification,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::guard: return "guard violation";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::certification: return "certification failure";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::invalid_argument, what) {}
};

/// A size or enumeration limit would be exceeded.
class GuardViolation : public Error {
 public:
  explicit GuardViolation(const std::string& what)
      : Error(ErrorKind::guard, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::domain, what) {}
};

/// An interval comparison or floor could not be decided at the working
/// precision. Never replaced by a guess.
class CertificationFailure : public Error {
 public:
  explicit CertificationFailure(const std::string& what)
      : Error(ErrorKind::certification, what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::parse,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lllsep
