#pragma once

#include <stdexcept>
#include <string>

namespace latentscope {

// Base class for everything thrown by this library. The CLI maps the
// subclasses to process exit codes (validation/config -> 2, I/O -> 3,
// numeric domain -> 4).
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data violates a contract (dimension mismatch, non-finite values, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

// A file is structurally malformed (bad magic, bad header, payload mismatch).
class FormatError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// A parameter is outside its allowed range (sigma <= 0, k out of range, ...).
class ConfigError : public Error {
public:
  using Error::Error;
};

// Filesystem-level failure; carries the offending path in the message.
class IoError : public Error {
public:
  using Error::Error;
};

// A result is mathematically undefined for the given input
// (e.g. rank correlation of a constant score vector).
class NumericDomainError : public Error {
public:
  using Error::Error;
};

}  // namespace latentscope
