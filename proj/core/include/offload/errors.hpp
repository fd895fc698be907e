#pragma once

#include <stdexcept>
#include <string>

namespace offload {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (non-finite entries, negative sizes...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A positive rate was requested over a channel with no usable eigenmode.
class NoChannel : public Error {
 public:
  using Error::Error;
};

/// The offload branch alone cannot meet the latency budget for this split.
class InfeasibleSplit : public Error {
 public:
  using Error::Error;
};

}  // namespace offload
