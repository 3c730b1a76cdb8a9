#pragma once

#include <stdexcept>
#include <string>

namespace mmcoop {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct PreconditionViolation : Error {
  using Error::Error;
};
struct JointLimitViolation : Error {
  using Error::Error;
};
struct UnreachableTarget : Error {
  using Error::Error;
};
struct NearSingular : Error {
  using Error::Error;
};
struct DegenerateOrientations : Error {
  using Error::Error;
};
struct IsolatedRobot : Error {
  using Error::Error;
};
struct NonMonotonicTime : Error {
  using Error::Error;
};
struct NotNeighbor : Error {
  using Error::Error;
};
struct InsufficientHistory : Error {
  using Error::Error;
};
struct WindowTooLong : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace mmcoop
