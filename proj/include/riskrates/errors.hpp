#pragma once

#include <stdexcept>
#include <string>

namespace riskrates {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input and configuration problems. The CLI maps these to exit code 2.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

// Solver failures. The CLI maps these to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace riskrates
