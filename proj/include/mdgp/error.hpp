#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace mdgp {

// Base class for every recoverable failure the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance parameters admit no feasible partition, or are malformed.
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

// Attribute table does not match its schema or the requested metric.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A formulation cannot be built for the given instance.
class FormulationError : public Error {
 public:
  using Error::Error;
};

// Exhaustive solver refuses instances above its size cap.
class SolverRefusal : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Pair values violate transitivity; triple holds 0-based indices i<j<k.
class DecodeError : public Error {
 public:
  DecodeError(std::array<int, 3> triple, const std::string& what)
      : Error(what), triple_(triple) {}

  std::array<int, 3> triple() const noexcept { return triple_; }

 private:
  std::array<int, 3> triple_;
};

// Solution file is not a partition of the instance's elements.
class VerificationError : public Error {
 public:
  using Error::Error;
};

// Caller broke a precondition (index out of range, mismatched sizes).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mdgp
