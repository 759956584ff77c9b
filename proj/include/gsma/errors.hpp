#pragma once

#include <stdexcept>
#include <string>

namespace gsma {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};
class SingularMatrix : public Error {
 public:
  using Error::Error;
};
class NoConvergence : public Error {
 public:
  using Error::Error;
};
class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};
class DegenerateSubspace : public Error {
 public:
  using Error::Error;
};
class NotSolvable : public Error {
 public:
  using Error::Error;
};
class ShiftSingular : public Error {
 public:
  using Error::Error;
};
class IterateSingular : public Error {
 public:
  using Error::Error;
};
class RegularizationFailed : public Error {
 public:
  using Error::Error;
};
class SingularCapacitance : public Error {
 public:
  using Error::Error;
};
class InterconnectionSingular : public Error {
 public:
  using Error::Error;
};
class GenerationFailed : public Error {
 public:
  using Error::Error;
};
class InsufficientData : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace gsma
