#pragma once

#include <stdexcept>
#include <string>

namespace orbdiam {

// Base for every failure raised by the library. Each subclass maps onto one
// CLI exit code (see io.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

class ModulusMismatch : public Error {
 public:
  explicit ModulusMismatch(const std::string& what) : Error("modulus mismatch: " + what) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// (A - Id)^d != 0, so the matrix was not unipotent.
class NotNilpotent : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class SpanFailure : public Error {
 public:
  using Error::Error;
};

// Sumset iteration stopped growing before covering V.
class NonSpanning : public Error {
 public:
  using Error::Error;
};

class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

// A constructed witness failed its own verification. Never expected to fire.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

class ReducibleInstance : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbdiam
