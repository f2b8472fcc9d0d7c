#pragma once

#include <stdexcept>
#include <string>

namespace mindef {

/// Failure categories raised by the library. The CLI maps these onto exit
/// codes, so new kinds must be added there as well.
enum class ErrorKind {
  Parse,
  DuplicateComplex,
  DuplicateReaction,
  InvalidNetwork,
  NonKinetic,
  SpeciesMismatch,
  DegenerateProblem,
  RankFailure,
  UnsupportedFormat,
  VerificationFailure,
  Solver,
  Internal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Failure tied to a 1-based source position (line 0 means "unknown").
/// The kind is Parse unless a more specific one applies, such as a
/// duplicate complex found while reading a file.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  ParseError(ErrorKind kind, const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mindef
