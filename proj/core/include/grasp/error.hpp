#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grasp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a domain invariant; `field()` names the culprit.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& detail);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(std::string column);
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class WrongRowCount : public Error {
 public:
  explicit WrongRowCount(std::size_t got);
  std::size_t got() const noexcept { return got_; }

 private:
  std::size_t got_;
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t expected, std::size_t got);
};

class EmptyFleet : public Error {
 public:
  EmptyFleet() : Error("no data centers to schedule on") {}
};

class AlreadyConnected : public Error {
 public:
  using Error::Error;
};

class UnknownSwitch : public Error {
 public:
  using Error::Error;
};

class NoPath : public Error {
 public:
  using Error::Error;
};

class ScriptError : public Error {
 public:
  using Error::Error;
};

}  // namespace grasp
