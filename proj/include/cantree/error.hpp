#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cantree {

// Base for every data or format error raised by the library. The CLI maps
// these to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateIdError : public Error {
 public:
  using Error::Error;
};

class EmptyTransactionError : public Error {
 public:
  using Error::Error;
};

class InvalidItemError : public Error {
 public:
  using Error::Error;
};

class InvalidMinSupportError : public Error {
 public:
  using Error::Error;
};

class NotPresentError : public Error {
 public:
  using Error::Error;
};

class SnapshotFormatError : public Error {
 public:
  using Error::Error;
};

class AlphabetTooLargeError : public Error {
 public:
  using Error::Error;
};

class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cantree
