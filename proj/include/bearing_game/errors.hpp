#pragma once

#include <stdexcept>
#include <string>

namespace bearing_game {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector needed for an angle or a frame has (near) zero length.
class DegenerateVector : public Error {
 public:
  using Error::Error;
};

/// Hazard and aircraft coincide where a polar quantity is required.
class ZeroRange : public Error {
 public:
  using Error::Error;
};

/// The line of minimum range cos(theta) = -v_h does not exist (v_h > 1).
class UndefinedTerminationLine : public Error {
 public:
  using Error::Error;
};

/// A retrograde evaluation was requested past a switching-function sign change.
class OutsideRegularRegion : public Error {
 public:
  using Error::Error;
};

/// A state is not covered by the optimal trajectory field.
class OutsideFieldCoverage : public Error {
 public:
  using Error::Error;
};

class InvalidInitialState : public Error {
 public:
  using Error::Error;
};

class NoCollisionGeometry : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the domain an operation is defined on (e.g. v_h for a barrier).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Scenario/config problem; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace bearing_game
