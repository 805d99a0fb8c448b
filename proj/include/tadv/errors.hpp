#pragma once

#include <stdexcept>
#include <string>

namespace tadv {

// Broken call contract: dimension mismatch, invalid argument, bad state.
struct ContractViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid or inconsistent configuration, from a file or built in code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: non-finite values, failed factorization.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The task map lost rank beyond tolerance. Carries the smallest singular
// value seen so callers can report how close to singular the map was.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double sigma_min)
      : std::runtime_error(what), sigma_min_(sigma_min) {}
  double sigma_min() const { return sigma_min_; }

 private:
  double sigma_min_;
};

}  // namespace tadv
