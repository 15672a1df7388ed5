#pragma once

#include <stdexcept>
#include <string>

namespace trevisan {

// Every error raised by the library derives from Error so callers (the CLI in
// particular) can map categories onto stable exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Parameters are well formed but the construction cannot satisfy them
// (required entropy exceeds what the source offers, degenerate gamma, ...).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Parameters violate a structural precondition of a construction.
class InvalidParameters : public Error {
 public:
  using Error::Error;
};

class NoRootError : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

// Not enough input or seed bits for the requested extraction.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed, truncated or corrupted design cache.
class FormatError : public Error {
 public:
  using Error::Error;
};

// An oracle was asked to work outside the size it can handle exactly.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace trevisan
