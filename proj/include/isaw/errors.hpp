#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isaw {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by all text parsers; position is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A reachable product construction grew past the configured state bound.
class StateBoundExceeded : public Error {
 public:
  explicit StateBoundExceeded(std::size_t bound)
      : Error("state bound exceeded (" + std::to_string(bound) + " states)"),
        bound_(bound) {}

  std::size_t bound() const { return bound_; }

 private:
  std::size_t bound_;
};

class UnboundVariableError : public Error {
 public:
  explicit UnboundVariableError(const std::string& name)
      : Error("unbound variable: " + name) {}
};

class DeltaSummandError : public Error {
 public:
  DeltaSummandError() : Error("delta summands are not synthesizable") {}
};

class EmptyEquationError : public Error {
 public:
  explicit EmptyEquationError(const std::string& var)
      : Error("equation for " + var + " has no summands") {}
};

class TactCollisionError : public Error {
 public:
  explicit TactCollisionError(const std::string& tact)
      : Error("auxiliary action '" + tact + "' occurs in the specification") {}
};

class NotBlockFormError : public Error {
 public:
  explicit NotBlockFormError(const std::string& what)
      : Error("program is not in block form: " + what) {}
};

}  // namespace isaw
