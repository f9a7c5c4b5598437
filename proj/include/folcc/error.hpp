#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace folcc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Evaluation outside the smooth domain of an expression (ln of a non-positive
// value, division by a near-zero value, |x| differentiated at 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A jet or map whose first derivative vanishes where an invertible one is needed.
class RegularityError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace folcc
