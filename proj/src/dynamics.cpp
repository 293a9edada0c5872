#include "wigrav/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wigrav/errors.hpp"

namespace wigrav {

EvolutionKind EvolutionKind::stepwise_diffusion(double rate) {
  if (!std::isfinite(rate) || rate < 0.0) {
    throw std::invalid_argument("diffusion rate must be finite and non-negative");
  }
  return {Tag::StepwiseDiffusion, rate};
}

const char* to_string(EvolutionKind::Tag tag) {
  switch (tag) {
    case EvolutionKind::Tag::QuantumReference: return "quantum";
    case EvolutionKind::Tag::Taylor: return "taylor";
    case EvolutionKind::Tag::Fit: return "fit";
    case EvolutionKind::Tag::Stepwise: return "stepwise";
    case EvolutionKind::Tag::StepwiseDiffusion: return "stepwise_diffusion";
  }
  return "unknown";
}

Vec4 to_internal(const PhasePoint& pt, const Params& params) {
  const UnitSystem& u = params.units();
  return {u.length_to_internal(pt.x1), u.length_to_internal(pt.x2), u.momentum_to_internal(pt.p1),
          u.momentum_to_internal(pt.p2)};
}

PhasePoint to_si(const Vec4& z, const Params& params) {
  const UnitSystem& u = params.units();
  return {u.length_to_si(z(0)), u.length_to_si(z(1)), u.momentum_to_si(z(2)),
          u.momentum_to_si(z(3))};
}

namespace {

// Flow of x' = p/m, p' = -(c1 + 2 c2 x) as x(t) = x0 + a x0 + b p0 + ox,
// p(t) = p0 + c x0 + e p0 + op. Storing the deviation from the identity keeps
// cosh(wt) - 1 ~ 1e-13 from being rounded away.
struct RelativeFlow {
  double a, b, c, e, ox, op;
};

RelativeFlow relative_flow(double c1, double c2, double mass, double t) {
  if (c2 < 0.0) {
    const double k = -2.0 * c2;
    const double omega = std::sqrt(k / mass);
    const double u = omega * t;
    const double sh = std::sinh(u);
    const double half = std::sinh(0.5 * u);
    const double chm1 = 2.0 * half * half;
    const double fixed = c1 / k;
    const double mw = mass * omega;
    return {chm1, sh / mw, mw * sh, chm1, -fixed * chm1, -mw * fixed * sh};
  }
  if (c2 > 0.0) {
    const double k = 2.0 * c2;
    const double omega = std::sqrt(k / mass);
    const double u = omega * t;
    const double sn = std::sin(u);
    const double half = std::sin(0.5 * u);
    const double cm1 = -2.0 * half * half;
    const double fixed = -c1 / k;
    const double mw = mass * omega;
    return {cm1, sn / mw, -mw * sn, cm1, -fixed * cm1, mw * fixed * sn};
  }
  return {0.0, t / mass, 0.0, 0.0, -c1 * t * t / (2.0 * mass), -c1 * t};
}

}  // namespace

AffineMap4 quadratic_flow(const QuadraticPotential& potential, double t, const Params& params) {
  const QuadraticPotential pot = potential.to_internal(params.units());
  const InternalConstants& k = params.internal();
  const RelativeFlow rel = relative_flow(pot.c1, pot.c2, k.mass, t);

  // u = P z + s with u = (x_avg, x_rel, p_avg, p_rel).
  const double r = std::numbers::sqrt2 / 2.0;
  Mat4 p;
  p << r, r, 0, 0,
      -r, r, 0, 0,
      0, 0, r, r,
      0, 0, -r, r;
  Vec4 s(0.0, -k.d * r, 0.0, 0.0);

  // Flow in u, stored as deviation from identity.
  Mat4 delta = Mat4::Zero();
  delta(0, 2) = t / k.mass;
  delta(1, 1) = rel.a;
  delta(1, 3) = rel.b;
  delta(3, 1) = rel.c;
  delta(3, 3) = rel.e;
  Vec4 phi(0.0, rel.ox, 0.0, rel.op);

  const Mat4 m = Mat4::Identity() + p.transpose() * delta * p;
  const Vec4 c = p.transpose() * (delta * s + phi);
  return {m, c};
}

AffineMap4 flow_taylor(double t, const Params& params) {
  return quadratic_flow(taylor_potential(params), t, params);
}

AffineMap4 flow_fit(double t, const Params& params) {
  return quadratic_flow(fit_potential(params), t, params);
}

namespace {

AffineMap4 flow_for(const EvolutionKind& kind, double t, const Params& params) {
  switch (kind.tag) {
    case EvolutionKind::Tag::Taylor: return flow_taylor(t, params);
    case EvolutionKind::Tag::Fit: return flow_fit(t, params);
    default: throw std::invalid_argument("backward_point needs a quadratic flow (taylor or fit)");
  }
}

}  // namespace

PhasePoint backward_point(const EvolutionKind& kind, const PhasePoint& pt, double t,
                          const Params& params) {
  const AffineMap4 back = flow_for(kind, t, params).inverse();
  return to_si(back(to_internal(pt, params)), params);
}

double stepwise_branch_value(int j, const PhasePoint& pt, double t, const Params& params,
                             const BranchSet& branches) {
  const int i = branch_index(j);
  const double kick = branches.F[i] * t;
  return branch_term(j, {pt.x1, pt.x2, pt.p1 - kick, pt.p2 + kick}, params, branches);
}

double diffusion_branch_value(int j, const PhasePoint& pt, double t, double rate,
                              const Params& params, const BranchSet& branches) {
  const int i = branch_index(j);
  const UnitSystem& u = params.units();
  const InternalConstants& k = params.internal();
  const auto& b = branches.internal;
  const double spread = rate * t / (u.momentum_unit() * u.momentum_unit());
  const double alpha_t = k.alpha / (1.0 + 2.0 * k.alpha * spread);
  const double shrink = alpha_t / k.alpha;

  const double a = u.length_to_internal(pt.x1) - b.x0[i];
  const double c = u.length_to_internal(pt.x2) - b.y0[i];
  const double q1 = u.momentum_to_internal(pt.p1) - b.F[i] * t;
  const double q2 = u.momentum_to_internal(pt.p2) + b.F[i] * t;
  const double g2 = b.gamma1[i] * b.gamma1[i] + b.gamma2[i] * b.gamma2[i];

  const double position = k.beta / std::numbers::pi * std::exp(-k.beta * (a * a + c * c));
  const double momentum =
      4.0 * alpha_t / (k.norm_N * std::numbers::pi) *
      std::exp(-alpha_t * (q1 * q1 + q2 * q2) - spread * alpha_t * g2 / (2.0 * k.alpha)) *
      std::cos(shrink * b.gamma1[i] * q1) * std::cos(shrink * b.gamma2[i] * q2) /
      (branches.D1[i] * branches.D2[i]);
  return u.density_to_si(position * momentum, 2);
}

double evolved_wigner(const EvolutionKind& kind, const PhasePoint& pt, double t,
                      const Params& params, const BranchSet& branches) {
  double sum = 0.0;
  switch (kind.tag) {
    case EvolutionKind::Tag::Taylor:
    case EvolutionKind::Tag::Fit:
      return initial_wigner(backward_point(kind, pt, t, params), params);
    case EvolutionKind::Tag::Stepwise:
      for (int j = 1; j <= kBranchCount; ++j) sum += stepwise_branch_value(j, pt, t, params, branches);
      return sum;
    case EvolutionKind::Tag::StepwiseDiffusion:
      for (int j = 1; j <= kBranchCount; ++j) {
        sum += diffusion_branch_value(j, pt, t, kind.diffusion, params, branches);
      }
      return sum;
    case EvolutionKind::Tag::QuantumReference:
      break;
  }
  throw MethodUnsupported("the quantum reference model has no phase-space representation");
}

RelativeState relative_of(const PhasePoint& pt, const Params& params) {
  const double r = std::numbers::sqrt2 / 2.0;
  return {r * (pt.x2 - pt.x1 - params.d()), r * (pt.p2 - pt.p1)};
}

PhasePoint point_from_relative(const RelativeState& rel, double x_avg, double p_avg,
                               const Params& params) {
  const double r = std::numbers::sqrt2 / 2.0;
  const double shifted = rel.x_rel + params.d() * r;
  return {r * (x_avg - shifted), r * (x_avg + shifted), r * (p_avg - rel.p_rel),
          r * (p_avg + rel.p_rel)};
}

namespace {

struct Rk4 {
  double mass;
  double kappa;
  double d;

  double force(double x) const {
    const double r = d + std::numbers::sqrt2 * x;
    if (r <= 0.1 * d) {
      throw SingularityApproached("relative trajectory reached d + sqrt(2) x_rel <= 0.1 d");
    }
    return -std::numbers::sqrt2 * kappa / (r * r);
  }

  void step(double& x, double& p, double h) const {
    const double k1x = p / mass;
    const double k1p = force(x);
    const double k2x = (p + 0.5 * h * k1p) / mass;
    const double k2p = force(x + 0.5 * h * k1x);
    const double k3x = (p + 0.5 * h * k2p) / mass;
    const double k3p = force(x + 0.5 * h * k2x);
    const double k4x = (p + h * k3p) / mass;
    const double k4p = force(x + h * k3x);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    force(x);
  }
};

}  // namespace

std::vector<RelativeState> exact_relative_trajectory(const RelativeState& start,
                                                     std::span<const double> t_grid,
                                                     const Params& params,
                                                     const TrajectoryOptions& options) {
  if (!(options.step > 0.0)) throw std::invalid_argument("RK4 step must be positive");
  const UnitSystem& u = params.units();
  const InternalConstants& k = params.internal();
  const Rk4 rk{k.mass, k.kappa, k.d};

  double x = u.length_to_internal(start.x_rel);
  double p = u.momentum_to_internal(start.p_rel);
  rk.force(x);
  double now = 0.0;
  std::vector<RelativeState> out;
  out.reserve(t_grid.size());
  for (double target : t_grid) {
    if (!(target >= now)) throw std::invalid_argument("time grid must be non-decreasing from 0");
    const double span = target - now;
    const auto steps = static_cast<long>(std::ceil(span / options.step - 1e-9));
    if (steps > 0) {
      const double h = span / static_cast<double>(steps);
      for (long n = 0; n < steps; ++n) rk.step(x, p, h);
    }
    now = target;
    out.push_back({u.length_to_si(x), u.momentum_to_si(p)});
  }
  return out;
}

double trajectory_halving_change(const RelativeState& start, double t_end, const Params& params,
                                 const TrajectoryOptions& options) {
  const double grid[] = {t_end};
  const auto coarse = exact_relative_trajectory(start, grid, params, options);
  const auto fine = exact_relative_trajectory(start, grid, params, {options.step / 2.0});
  const double unit = params.hbar() / params.delta_x();
  return std::abs(fine.back().p_rel - coarse.back().p_rel) / unit;
}

}  // namespace wigrav
