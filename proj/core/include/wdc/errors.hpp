#pragma once

#include <stdexcept>
#include <string>

namespace wdc {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input file could not be parsed. Carries a location string ("file:line" or
/// a JSON pointer) so the offending field can be found.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& what)
      : Error(location.empty() ? what : location + ": " + what),
        location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

/// A value violates a domain invariant (parameter range, self-map bound, ...).
class ValidationError : public Error {
 public:
  enum class Kind {
    ParameterRange,
    SelfMapViolation,
    WrongSpace,
    NotADiskPoint,
  };

  ValidationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace wdc
