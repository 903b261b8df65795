#include "grasp/error.hpp"

namespace grasp {

namespace {

std::string with_line(const std::string& what, std::size_t line) {
  if (line == 0) return what;
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(with_line(what, line)), line_(line) {}

ValidationError::ValidationError(std::string field, const std::string& detail)
    : Error(field + ": " + detail), field_(std::move(field)) {}

MissingColumn::MissingColumn(std::string column)
    : Error("missing column '" + column + "'"), column_(std::move(column)) {}

WrongRowCount::WrongRowCount(std::size_t got)
    : Error("expected 8760 hourly rows, got " + std::to_string(got)), got_(got) {}

LengthMismatch::LengthMismatch(std::size_t expected, std::size_t got)
    : Error("length mismatch: expected " + std::to_string(expected) + ", got " +
            std::to_string(got)) {}

}  // namespace grasp
