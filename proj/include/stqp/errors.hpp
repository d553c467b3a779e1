#pragma once

#include <stdexcept>
#include <string>

namespace stqp {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// Raised when a problem exceeds an enumeration or solver size cap.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& msg) : Error(msg) {}
};

}  // namespace stqp
