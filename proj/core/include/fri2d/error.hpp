#pragma once

#include <stdexcept>
#include <string>

namespace fri2d {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, violated preconditions, uncovered sampling windows.
/// The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Rank collapse, singular systems, division by a vanishing response.
/// The CLI maps this to exit code 3.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace fri2d
