#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

// Argument outside the mathematical domain of an operation (r = 0 for a
// singular family, d < 2, non-half-integer j, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The phase mismatch does not change sign across (-m, m).
class NoBoundState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shooting failed after a bound state was bracketed: stiffness, supercritical
// coupling, convergence to an excited state.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace dirac
