#pragma once

#include "wigrav/params.hpp"
#include "wigrav/wigner_state.hpp"

namespace wigrav {

/// V(x_rel) = c0 + c1 x_rel + c2 x_rel^2 over the relative coordinate
/// x_rel = (x2 - x1 - d)/sqrt(2). SI coefficients: J, J/m, J/m^2.
struct QuadraticPotential {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double value(double x_rel) const { return c0 + (c1 + c2 * x_rel) * x_rel; }
  double derivative(double x_rel) const { return c1 + 2.0 * c2 * x_rel; }

  /// Same polynomial with x in sigma and V in hbar/s.
  QuadraticPotential to_internal(const UnitSystem& units) const;
};

/// Second-order Taylor expansion of the Newtonian potential at x_rel = 0.
QuadraticPotential taylor_potential(const Params& params);

/// Quadratic through the Newtonian potential at x_rel = 0 and +-delta_x/sqrt(2).
QuadraticPotential fit_potential(const Params& params);

/// -kappa / (d + sqrt(2) x_rel). Throws DomainError when d + sqrt(2) x_rel <= 0.
double v_newton(double x_rel, const Params& params);
double dv_newton(double x_rel, const Params& params);

double v_taylor(double x_rel, const Params& params);
double dv_taylor(double x_rel, const Params& params);
double v_fit(double x_rel, const Params& params);
double dv_fit(double x_rel, const Params& params);

/// F_j = kappa / xbar_j^2 for each branch. Particle 1 is pushed by +F_j and
/// particle 2 by -F_j.
BranchSet::Array stepwise_forces(const BranchSet& branches, const Params& params);

}  // namespace wigrav
