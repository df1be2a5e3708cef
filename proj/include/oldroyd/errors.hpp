// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace oldroyd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched grids, component counts or field kinds.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its stated domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Besov index outside the supported (p = 2) family.
class UnsupportedIndexError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Non-finite values appeared while stepping.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::int64_t step, double time)
      : Error(what), step_(step), time_(time) {}

  std::int64_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::int64_t step_;
  double time_;
};

}  // namespace oldroyd
