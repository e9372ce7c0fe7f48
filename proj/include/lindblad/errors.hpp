#pragma once

#include <stdexcept>
#include <string>

namespace lindblad {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class TraceViolation : public Error {
public:
  using Error::Error;
};

/// A state left the unit Bloch ball by more than the admissibility slack.
class AdmissibilityViolation : public Error {
public:
  using Error::Error;
};

class InvalidParams : public Error {
public:
  using Error::Error;
};

class UnsupportedKind : public Error {
public:
  using Error::Error;
};

class StepLimitExceeded : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class NoCycleDetected : public Error {
public:
  using Error::Error;
};

}  // namespace lindblad
