#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace folkseg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (bad JSON, bad CSV row, truncated WAV).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  /// 1-based line number, 0 when the input is not line oriented.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a data invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string song_id, std::string field, const std::string& what,
                  std::size_t line = 0)
      : Error((line ? "line " + std::to_string(line) + ": " : std::string()) + "song '" +
              song_id + "', field '" + field + "': " + what),
        song_id_(std::move(song_id)),
        field_(std::move(field)),
        reason_(what) {}

  const std::string& song_id() const noexcept { return song_id_; }
  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string song_id_;
  std::string field_;
  std::string reason_;
};

/// Inputs that are individually valid but cannot be combined
/// (missing reference song, too few groups, k larger than the corpus).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Singular matrices and non-converging special functions.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace folkseg
