#pragma once

#include <stdexcept>
#include <string>

namespace scanpath {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RecordingTooShort : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InfeasibleSplit : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace scanpath
