#pragma once

#include <stdexcept>
#include <string>

namespace mot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (e.g. an integration bound outside the support).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Objects that do not fit together (marginal sums differ, kernel domain mismatch, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Convex-order, barycentre-dispersion or mean-equality requirement violated.
class OrderError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ScaleError : public Error {
 public:
  using Error::Error;
};

// A construction produced a value its own invariants rule out.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mot
