#include "wigrav/potentials.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "wigrav/errors.hpp"

namespace wigrav {

QuadraticPotential QuadraticPotential::to_internal(const UnitSystem& units) const {
  const double s = units.length_unit();
  const double h = units.action_unit();
  return {c0 / h, c1 * s / h, c2 * s * s / h};
}

QuadraticPotential taylor_potential(const Params& params) {
  const double k = params.kappa();
  const double d = params.d();
  return {-k / d, std::numbers::sqrt2 * k / (d * d), -2.0 * k / (d * d * d)};
}

QuadraticPotential fit_potential(const Params& params) {
  const double k = params.kappa();
  const double d = params.d();
  const double gap = (d - params.delta_x()) * (d + params.delta_x());
  return {-k / d, std::numbers::sqrt2 * k / gap, -2.0 * k / (d * gap)};
}

namespace {

double separation(double x_rel, const Params& params) {
  const double r = params.d() + std::numbers::sqrt2 * x_rel;
  // Below a few ulps of d the sum is rounding noise of an exact zero.
  if (!(r > 4.0 * std::numeric_limits<double>::epsilon() * params.d())) {
    throw DomainError("Newtonian potential undefined for d + sqrt(2) x_rel <= 0");
  }
  return r;
}

}  // namespace

double v_newton(double x_rel, const Params& params) {
  return -params.kappa() / separation(x_rel, params);
}

double dv_newton(double x_rel, const Params& params) {
  const double r = separation(x_rel, params);
  return std::numbers::sqrt2 * params.kappa() / (r * r);
}

double v_taylor(double x_rel, const Params& params) { return taylor_potential(params).value(x_rel); }
double dv_taylor(double x_rel, const Params& params) {
  return taylor_potential(params).derivative(x_rel);
}
double v_fit(double x_rel, const Params& params) { return fit_potential(params).value(x_rel); }
double dv_fit(double x_rel, const Params& params) { return fit_potential(params).derivative(x_rel); }

BranchSet::Array stepwise_forces(const BranchSet& branches, const Params& params) {
  BranchSet::Array f{};
  for (int i = 0; i < kBranchCount; ++i) {
    f[i] = params.kappa() / (branches.xbar[i] * branches.xbar[i]);
  }
  return f;
}

}  // namespace wigrav
