#pragma once

#include <span>
#include <vector>

#include "wigrav/affine_map.hpp"
#include "wigrav/params.hpp"
#include "wigrav/potentials.hpp"
#include "wigrav/wigner_state.hpp"

namespace wigrav {

/// Dynamical model used to evolve the initial state.
struct EvolutionKind {
  enum class Tag { QuantumReference, Taylor, Fit, Stepwise, StepwiseDiffusion };

  Tag tag = Tag::Taylor;
  double diffusion = 0.0;  // momentum variance growth per particle [(kg m/s)^2 / s]

  static EvolutionKind quantum_reference() { return {Tag::QuantumReference, 0.0}; }
  static EvolutionKind taylor() { return {Tag::Taylor, 0.0}; }
  static EvolutionKind fit() { return {Tag::Fit, 0.0}; }
  static EvolutionKind stepwise() { return {Tag::Stepwise, 0.0}; }
  /// Throws std::invalid_argument for negative or non-finite rates.
  static EvolutionKind stepwise_diffusion(double rate);

  bool is_quadratic() const { return tag == Tag::Taylor || tag == Tag::Fit; }
};

const char* to_string(EvolutionKind::Tag tag);

/// Forward flow of a quadratic relative potential over time t [s], as an
/// affine map on internal coordinates. Centre-of-mass motion is free flight.
AffineMap4 quadratic_flow(const QuadraticPotential& potential, double t, const Params& params);

AffineMap4 flow_taylor(double t, const Params& params);
AffineMap4 flow_fit(double t, const Params& params);

/// Phase point from which the quadratic flow of `kind` reaches `pt` after
/// time t. Throws std::invalid_argument unless kind is Taylor or Fit.
PhasePoint backward_point(const EvolutionKind& kind, const PhasePoint& pt, double t,
                          const Params& params);

/// Branch j under constant opposite forces +-F_j, positions frozen.
double stepwise_branch_value(int j, const PhasePoint& pt, double t, const Params& params,
                             const BranchSet& branches);

/// Branch j under constant forces with momentum diffusion at `rate` (SI).
double diffusion_branch_value(int j, const PhasePoint& pt, double t, double rate,
                              const Params& params, const BranchSet& branches);

/// Evolved two-particle Wigner function at an SI point for any classical model.
double evolved_wigner(const EvolutionKind& kind, const PhasePoint& pt, double t,
                      const Params& params, const BranchSet& branches);

struct RelativeState {
  double x_rel = 0.0;  // [m]
  double p_rel = 0.0;  // [kg m/s]
};

struct TrajectoryOptions {
  double step = 1e-3;  // [s]
};

/// Classic RK4 solution of x' = p/m, p' = -V_N'(x) for the relative
/// coordinate, sampled at every time of `t_grid` (non-decreasing, >= 0).
/// Throws SingularityApproached once d + sqrt(2) x_rel <= 0.1 d.
std::vector<RelativeState> exact_relative_trajectory(const RelativeState& start,
                                                     std::span<const double> t_grid,
                                                     const Params& params,
                                                     const TrajectoryOptions& options = {});

/// Change of the final p_rel when the RK4 step is halved, in units of hbar/delta_x.
double trajectory_halving_change(const RelativeState& start, double t_end, const Params& params,
                                 const TrajectoryOptions& options = {});

/// Relative coordinates of a two-particle point and back (SI).
RelativeState relative_of(const PhasePoint& pt, const Params& params);
PhasePoint point_from_relative(const RelativeState& rel, double x_avg, double p_avg,
                               const Params& params);

Vec4 to_internal(const PhasePoint& pt, const Params& params);
PhasePoint to_si(const Vec4& z, const Params& params);

}  // namespace wigrav
