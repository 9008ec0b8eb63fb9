#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ctower {

// Base of every error raised by the library. Each subclass names one failure
// kind so callers (and the CLI) can tell computation errors from usage errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A lazy cell was demanded while it was already being evaluated: the
// definition refers to itself without producing anything first.
class NonProductiveDefinition : public Error {
 public:
  using Error::Error;
};

class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

class SingularDivision : public Error {
 public:
  using Error::Error;
};

// fold over a tower that never reached its Constant tail within the bound.
class Unbounded : public Error {
 public:
  using Error::Error;
};

// Restricted series functions (exp0, log1, sqrt1) got the wrong zeroth term.
class BadHead : public Error {
 public:
  using Error::Error;
};

class NonzeroInnerConstant : public Error {
 public:
  using Error::Error;
};

// Reversion needs u0 = 0 and u1 != 0.
class BadLinearTerm : public Error {
 public:
  using Error::Error;
};

class NegativeOrder : public Error {
 public:
  using Error::Error;
};

class FieldMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed expression text. offset is a byte offset into the source.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownFunction : public Error {
 public:
  UnknownFunction(std::size_t offset, const std::string& name);

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace ctower
