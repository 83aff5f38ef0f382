#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace matprop {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed matrix, term or relation text. `position` is a byte offset.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// A caller broke an operation's precondition (arity, pointedness, range...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A configured enumeration cap was exceeded. Never a verdict.
class ResourceError : public Error {
public:
  using Error::Error;
};

}  // namespace matprop
