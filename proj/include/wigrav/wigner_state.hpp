#pragma once

#include <array>

#include "wigrav/params.hpp"

namespace wigrav {

inline constexpr int kBranchCount = 9;

/// A point (x1, x2, p1, p2) of the two-particle phase space in SI units.
struct PhasePoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

/// Per-branch parameters of the nine Gaussian x cosine terms making up the
/// initial two-particle Wigner function. Particle 1 sits around -d/2 and
/// particle 2 around +d/2. Arrays are indexed 0..8 for branches j = 1..9.
struct BranchSet {
  using Array = std::array<double, kBranchCount>;

  // SI values.
  Array x0;      // particle-1 position center [m]
  Array y0;      // particle-2 position center [m]
  Array gamma1;  // fringe wavenumber on p1 [1/(kg m/s)]
  Array gamma2;  // fringe wavenumber on p2 [1/(kg m/s)]
  Array D1;      // divisor, 1 or 2
  Array D2;
  Array xbar;    // |x0 - y0| [m]
  Array F;       // stepwise constant force G m^2 / xbar^2 [N]

  /// Same data in internal units (sigma, hbar/sigma, seconds).
  struct Internal {
    Array x0;
    Array y0;
    Array gamma1;
    Array gamma2;
    Array F;  // momentum kick rate [hbar/(sigma s)]
  } internal;

  static BranchSet build(const Params& params);
};

/// Single-particle Wigner function of the two-arm superposition, q measured
/// from the interferometer center. SI in, SI density out.
double single_particle_wigner(double q, double p, const Params& params);

/// Branch term w_j (j = 1..9) at an SI phase point. Throws IndexOutOfRange.
double branch_term(int j, const PhasePoint& pt, const Params& params, const BranchSet& branches);

/// Initial two-particle Wigner function as the product of the single-particle
/// functions of both masses.
double initial_wigner(const PhasePoint& pt, const Params& params);

/// Internal-unit evaluations used by the integrators. Coordinates are in
/// sigma and hbar/sigma; densities per hbar^2.
namespace internal {

double single_particle_wigner(double q, double p, const InternalConstants& k);
double branch_term(int index, double x1, double x2, double p1, double p2,
                   const InternalConstants& k, const BranchSet& branches);

}  // namespace internal

/// Throws IndexOutOfRange unless 1 <= j <= 9; returns j - 1.
int branch_index(int j);

}  // namespace wigrav
