#pragma once

#include <stdexcept>
#include <string>

namespace specmeasure {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linear system with (numerically) repeated poles or other rank loss.
struct SingularSystemError : Error {
  using Error::Error;
};

/// Resolvent requested on the real axis, where it may not exist.
struct ShiftOnRealAxisError : Error {
  using Error::Error;
};

/// An operator term violates the self-adjointness requirements.
struct SelfAdjointnessError : Error {
  using Error::Error;
};

/// Derivative order outside the supported range.
struct UnsupportedOrderError : Error {
  using Error::Error;
};

/// Inner product or operator application across different bases/grids.
struct BasisMismatchError : Error {
  using Error::Error;
};

/// Pencil with a non-positive or otherwise inadmissible B.
struct InvalidPencilError : Error {
  using Error::Error;
};

/// Operator description rejected at assembly.
struct InvalidOperatorError : Error {
  using Error::Error;
};

/// Truncated shifted system was (numerically) singular.
struct NearSpectrumError : Error {
  using Error::Error;
};

/// Expression text could not be parsed; `offset` is the byte position.
struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off) : Error(msg), offset(off) {}
};

/// Run configuration failed validation; message carries the field path.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace specmeasure
