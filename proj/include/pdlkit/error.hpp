#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdlkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed formula text. `position` is a 0-based byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A construct that the selected dialect does not admit.
class DialectError : public Error {
 public:
  using Error::Error;
};

// Inconsistent or malformed Kripke model, or a model lacking a required part.
class ModelError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A caller-configured resource ceiling was hit; this is not a verdict.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdlkit
