#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqrec {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed a value outside an operation's domain.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Token not present in the vocabulary and no fallback applies.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Unseen token none of whose n-grams were learned.
class UnrepresentableError : public Error {
 public:
  using Error::Error;
};

// No query session of a user could be turned into a vector.
class ColdUserError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class ModelFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace seqrec
