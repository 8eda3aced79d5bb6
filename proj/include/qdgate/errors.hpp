#pragma once

#include <stdexcept>
#include <string>

namespace qdgate {

/// Invalid physical or numerical parameter.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state or operator does not fit the basis it is used with.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The integrator produced non-finite values or breached a tolerance in fail-hard mode.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time_ps)
      : std::runtime_error(what), time_ps_(time_ps) {}

  double time_ps() const { return time_ps_; }

 private:
  double time_ps_;
};

}  // namespace qdgate
