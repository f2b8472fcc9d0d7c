#include "mindef/error.hpp"

namespace mindef {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::DuplicateComplex: return "DuplicateComplex";
    case ErrorKind::DuplicateReaction: return "DuplicateReaction";
    case ErrorKind::InvalidNetwork: return "InvalidNetwork";
    case ErrorKind::NonKinetic: return "NonKinetic";
    case ErrorKind::SpeciesMismatch: return "SpeciesMismatch";
    case ErrorKind::DegenerateProblem: return "DegenerateProblem";
    case ErrorKind::RankFailure: return "RankFailure";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::VerificationFailure: return "VerificationFailure";
    case ErrorKind::Solver: return "SolverError";
    case ErrorKind::Internal: return "InternalError";
  }
  return "Error";
}

namespace {

std::string with_position(const std::string& message, std::size_t line,
                          std::size_t column) {
  if (line == 0) return message;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) +
         ": " + message;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : ParseError(ErrorKind::Parse, message, line, column) {}

ParseError::ParseError(ErrorKind kind, const std::string& message, std::size_t line,
                       std::size_t column)
    : Error(kind, with_position(message, line, column)),
      line_(line),
      column_(column) {}

}  // namespace mindef
