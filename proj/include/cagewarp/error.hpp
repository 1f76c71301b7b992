// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cagewarp {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller-side contract violation (bad flag combination, out-of-range parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or stream.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Cage topology or geometry unsuitable for the requested operation.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Iterative solve failed to meet its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace cagewarp
