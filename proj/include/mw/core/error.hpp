#pragma once

#include <stdexcept>
#include <string>

namespace mw {

// Base for every error raised by the warehouse libraries.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument to a library operation (bad range, k < 1, unknown id).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// File could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

// Snapshot could not be written.
class PersistenceError : public Error {
 public:
  using Error::Error;
};

// Snapshot or auxiliary table could not be read or failed integrity checks.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Input file is structurally unusable (missing header column, unreadable).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Two input rows disagree about the same entity or (poi, period) pair.
class IngestConflictError : public Error {
 public:
  using Error::Error;
};

// Generator configuration is invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mw
