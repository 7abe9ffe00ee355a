#pragma once

#include <stdexcept>
#include <string>

namespace wfx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched grids or vector lengths.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Cell or element index outside its range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A parameter violates a documented precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise unusable input data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Enumeration refused because it would exceed the size cap.
class CapError : public Error {
 public:
  using Error::Error;
};

/// A bracketing solver ran out of room before the target was enclosed.
class BracketError : public Error {
 public:
  using Error::Error;
};

}  // namespace wfx
