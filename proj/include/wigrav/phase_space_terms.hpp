#pragma once

#include <vector>

#include "wigrav/dynamics.hpp"
#include "wigrav/gaussian_term.hpp"

namespace wigrav {

/// One complex Gaussian component of an evolved branch. The Wigner function
/// in internal units is Re sum over components.
struct BranchComponent {
  int branch = 0;  // 0..8
  Term4 term;
};

using StateComponents = std::vector<BranchComponent>;

/// Components of the initial state: one per branch, two for the branch with
/// fringes in both momenta.
StateComponents initial_components(const Params& params, const BranchSet& branches);

/// Components of the state evolved for time t under a classical model.
/// Throws MethodUnsupported for the quantum reference.
StateComponents evolved_components(const EvolutionKind& kind, double t, const Params& params,
                                   const BranchSet& branches);

/// Re sum of components at an internal point z = (x1, x2, p1, p2).
double evaluate(const StateComponents& components, const Vec4& z);

/// Reduced Wigner function of particle 2, coordinates (x2, p2).
std::vector<Term2> particle2_marginal(const StateComponents& components);

/// Momentum marginal, coordinates (p1, p2).
std::vector<Term2> momentum_marginal(const StateComponents& components);

/// Diffusion rate in internal units [(hbar/sigma)^2 / s].
double internal_diffusion(double rate_si, const Params& params);

}  // namespace wigrav
