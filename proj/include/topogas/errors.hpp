#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace topogas {

/// Parameters or options outside their permitted range.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An input sample that cannot be consumed (non-finite coordinates and the like).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called in a state it does not accept.
class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A measure that is not defined for the given arguments (e.g. distance to an empty graph).
class MeasureError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Malformed text document. Carries the 1-based line and the offending field.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::string field, const std::string &message)
      : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + message),
        line_(line), field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string &field() const noexcept { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

} // namespace topogas
