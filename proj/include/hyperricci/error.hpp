#pragma once

#include <stdexcept>
#include <string>

namespace hyperricci {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node id or label that is not part of the hypergraph in question.
class UnknownNodeError : public Error {
 public:
  explicit UnknownNodeError(const std::string& what) : Error("unknown node: " + what) {}
};

/// Malformed input documents; carries an optional 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hyperricci
