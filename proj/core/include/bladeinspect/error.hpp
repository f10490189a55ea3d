#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bladeinspect {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad dimension, out-of-range count, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

enum class PpmErrorKind {
  kBadMagic,
  kMalformedHeader,
  kBadMaxval,
  kZeroDimension,
  kTruncated,
};

const char* to_string(PpmErrorKind kind);

/// Decoding failure; `offset()` is the byte position at which decoding stopped.
class PpmError : public Error {
 public:
  PpmError(PpmErrorKind kind, std::size_t offset, const std::string& detail);

  PpmErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  PpmErrorKind kind_;
  std::size_t offset_;
};

enum class CsvErrorKind {
  kBadHeader,
  kWrongColumnCount,
  kMissingId,
  kDuplicateId,
  kEmptyLabel,
  kBadNumber,
  kEmpty,
};

const char* to_string(CsvErrorKind kind);

/// Tabular input failure; `line()` is 1-based.
class CsvError : public Error {
 public:
  CsvError(CsvErrorKind kind, std::size_t line, const std::string& detail);

  CsvErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  CsvErrorKind kind_;
  std::size_t line_;
};

/// Cross-validation protocol violation, e.g. a training split missing a class.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace bladeinspect
