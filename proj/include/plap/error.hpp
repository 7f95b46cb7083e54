#pragma once

#include <stdexcept>
#include <string>

namespace plap {

// Invalid user input: parameters, grids, config text. CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The computation itself failed (blow-up, non-monotone stencil). CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A measurement or evaluation was requested outside its domain of validity
// (empty cylinder, one-sided node, degenerate gradient, constant field).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plap
