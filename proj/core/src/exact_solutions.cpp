#include "dirac/exact_solutions.hpp"

#include <cmath>

#include "dirac/errors.hpp"

namespace dirac {

CoulombGround::CoulombGround(double alpha, double m) : alpha_(alpha), m_(m) {
  if (!(m > 0)) throw DomainError("mass must be positive");
  if (!(alpha > 0)) throw DomainError("coupling must be positive");
  if (alpha >= 1) throw SolverError("supercritical coupling: alpha >= 1");
  gamma_ = std::sqrt((1.0 - alpha) * (1.0 + alpha));
  const double g = std::tgamma(2.0 * gamma_ + 1.0);
  c1_ = std::sqrt(m * alpha * (1.0 + gamma_) / g);
  c2_ = -std::sqrt(m * alpha * (1.0 - gamma_) / g);
}

double CoulombGround::psi1(double r) const {
  if (r <= 0) return 0.0;
  const double x = m_ * alpha_ * r;
  return c1_ * std::pow(2.0 * x, gamma_) * std::exp(-x);
}

double CoulombGround::psi2(double r) const {
  if (r <= 0) return 0.0;
  const double x = m_ * alpha_ * r;
  return c2_ * std::pow(2.0 * x, gamma_) * std::exp(-x);
}

CoulombGround coulomb_ground(double alpha, double m) { return CoulombGround(alpha, m); }

}  // namespace dirac
