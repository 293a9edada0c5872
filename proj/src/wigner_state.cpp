#include "wigrav/wigner_state.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wigrav/errors.hpp"

namespace wigrav {

int branch_index(int j) {
  if (j < 1 || j > kBranchCount) {
    throw IndexOutOfRange("branch index " + std::to_string(j) + " outside 1..9");
  }
  return j - 1;
}

BranchSet BranchSet::build(const Params& params) {
  const double d = params.d();
  const double dx = params.delta_x();
  const double g = dx / params.hbar();
  const double far = -(d + dx) / 2.0;
  const double near = -(d - dx) / 2.0;
  const double mid = -d / 2.0;

  BranchSet b{};
  b.x0 = {far, far, far, near, near, near, mid, mid, mid};
  b.y0 = {(d - dx) / 2.0, (d + dx) / 2.0, d / 2.0, (d - dx) / 2.0, (d + dx) / 2.0,
          d / 2.0,        (d - dx) / 2.0, (d + dx) / 2.0, d / 2.0};
  b.gamma1 = {0, 0, 0, 0, 0, 0, g, g, g};
  b.gamma2 = {0, 0, g, 0, 0, g, 0, 0, g};
  b.D1 = {2, 2, 2, 2, 2, 2, 1, 1, 1};
  b.D2 = {2, 2, 1, 2, 2, 1, 2, 2, 1};

  const UnitSystem& u = params.units();
  for (int i = 0; i < kBranchCount; ++i) {
    b.xbar[i] = std::abs(b.x0[i] - b.y0[i]);
    b.F[i] = params.kappa() / (b.xbar[i] * b.xbar[i]);
    b.internal.x0[i] = u.length_to_internal(b.x0[i]);
    b.internal.y0[i] = u.length_to_internal(b.y0[i]);
    // gamma * p is dimensionless, so gamma scales inversely to p.
    b.internal.gamma1[i] = b.gamma1[i] * u.momentum_unit();
    b.internal.gamma2[i] = b.gamma2[i] * u.momentum_unit();
    b.internal.F[i] = u.momentum_to_internal(b.F[i]);
  }
  return b;
}

namespace internal {

double single_particle_wigner(double q, double p, const InternalConstants& k) {
  const double h = k.delta_x / 2.0;
  const double lobes = std::exp(-(q + h) * (q + h) / 2.0) + std::exp(-(q - h) * (q - h) / 2.0) +
                       2.0 * std::exp(-q * q / 2.0) * std::cos(k.delta_x * p);
  return std::exp(-k.alpha * p * p) * lobes / (std::numbers::pi * std::sqrt(k.norm_N));
}

double branch_term(int index, double x1, double x2, double p1, double p2,
                   const InternalConstants& k, const BranchSet& branches) {
  const auto& b = branches.internal;
  const double a = x1 - b.x0[index];
  const double c = x2 - b.y0[index];
  const double envelope =
      std::exp(-k.beta * (a * a + c * c) - k.alpha * (p1 * p1 + p2 * p2));
  const double fringes = std::cos(b.gamma1[index] * p1) * std::cos(b.gamma2[index] * p2) /
                         (branches.D1[index] * branches.D2[index]);
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  return 4.0 / (k.norm_N * pi2) * envelope * fringes;
}

}  // namespace internal

double single_particle_wigner(double q, double p, const Params& params) {
  const UnitSystem& u = params.units();
  const double w = internal::single_particle_wigner(u.length_to_internal(q),
                                                    u.momentum_to_internal(p), params.internal());
  return u.density_to_si(w, 1);
}

double branch_term(int j, const PhasePoint& pt, const Params& params, const BranchSet& branches) {
  const int i = branch_index(j);
  const UnitSystem& u = params.units();
  const double w = internal::branch_term(i, u.length_to_internal(pt.x1), u.length_to_internal(pt.x2),
                                         u.momentum_to_internal(pt.p1),
                                         u.momentum_to_internal(pt.p2), params.internal(), branches);
  return u.density_to_si(w, 2);
}

double initial_wigner(const PhasePoint& pt, const Params& params) {
  const double half_d = params.d() / 2.0;
  return single_particle_wigner(pt.x1 + half_d, pt.p1, params) *
         single_particle_wigner(pt.x2 - half_d, pt.p2, params);
}

}  // namespace wigrav
