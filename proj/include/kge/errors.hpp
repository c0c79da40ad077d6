#pragma once

#include <stdexcept>
#include <string>

namespace kge {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or missing configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable, malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Training diverged (non-finite loss or parameter).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint file is not in the expected binary format.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace kge
