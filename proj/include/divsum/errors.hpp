#pragma once

#include <stdexcept>
#include <string>

namespace divsum {

// Base of every error raised by the library. `module()` names the
// component that raised it so the CLI can tag its error records.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Precondition or domain violation (bad dimension, bad modulus, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An enumeration, sieve or quadrature budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Two independent computation routes disagreed. Never downgraded to a warning.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Numerical method did not reach its target accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(std::string module, const std::string& what, double achieved)
      : Error(std::move(module), what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace divsum
