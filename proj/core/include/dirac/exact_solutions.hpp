#pragma once

// Closed-form Dirac-Coulomb ground state, V = -alpha/r, d = 3, j = 1/2,
// tau = -1:
//   psi_{1,2}(r) = +-sqrt(m alpha (1 +- g) / Gamma(2g + 1)) (2 m alpha r)^g e^{-m alpha r}
// with g = sqrt(1 - alpha^2) and E = m g.

#include <array>

namespace dirac {

class CoulombGround {
 public:
  // Throws SolverError for alpha >= 1 (supercritical) and DomainError for
  // alpha <= 0 or m <= 0.
  CoulombGround(double alpha, double m);

  double alpha() const noexcept { return alpha_; }
  double mass() const noexcept { return m_; }
  double gamma() const noexcept { return gamma_; }
  double energy() const noexcept { return m_ * gamma_; }
  double decay() const noexcept { return m_ * alpha_; }

  double psi1(double r) const;
  double psi2(double r) const;
  std::array<double, 2> at(double r) const { return {psi1(r), psi2(r)}; }

 private:
  double alpha_, m_, gamma_;
  double c1_, c2_;
};

CoulombGround coulomb_ground(double alpha, double m);

}  // namespace dirac
