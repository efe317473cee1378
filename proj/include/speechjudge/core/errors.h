#pragma once

#include <stdexcept>
#include <string>

namespace speechjudge {

/// Base for every fault raised by the harness. Data-level problems such as an
/// unparseable judge completion are values, not errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

/// A required field was not populated before the call.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The math/code classifier replied with something that is not a boxed Yes/No.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

class ScreeningError : public Error {
 public:
  using Error::Error;
};

/// WER with an empty reference.
class UndefinedWerError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A model service failed after exhausting its retry budget.
class TransportError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace speechjudge
