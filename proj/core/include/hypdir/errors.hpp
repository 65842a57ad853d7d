#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypdir {

enum class ErrorCode {
  InvalidArgument,
  SingularMatrix,
  IdentityElement,
  FixesBasepoint,
  EmptyGenerators,
  GeneratorNotFace,
  NotVerified,
  NoEdges,
  QuadratureNotConverged,
  ExplosionGuard,
  InvalidRho,
  InsufficientRadius,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hypdir
