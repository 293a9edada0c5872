#include "wigrav/phase_space_terms.hpp"

#include <cmath>
#include <numbers>

#include "wigrav/errors.hpp"

namespace wigrav {

namespace {

// cos(a) cos(b) = Re[e^{i(a+b)}]/2 + Re[e^{i(a-b)}]/2
void push_fringes(StateComponents& out, int branch, Term4 base, double g1, double g2) {
  if (g1 != 0.0 && g2 != 0.0) {
    base.log_weight += std::log(0.5);
    Term4 minus = base;
    base.wavevector = Vec4(0.0, 0.0, g1, g2);
    minus.wavevector = Vec4(0.0, 0.0, g1, -g2);
    out.push_back({branch, base});
    out.push_back({branch, minus});
  } else {
    base.wavevector = Vec4(0.0, 0.0, g1, g2);
    out.push_back({branch, base});
  }
}

}  // namespace

double internal_diffusion(double rate_si, const Params& params) {
  const double unit = params.units().momentum_unit();
  return rate_si / (unit * unit);
}

StateComponents initial_components(const Params& params, const BranchSet& branches) {
  const InternalConstants& k = params.internal();
  const auto& b = branches.internal;
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  StateComponents out;
  for (int i = 0; i < kBranchCount; ++i) {
    Term4 t;
    t.log_weight = std::log(4.0 / (k.norm_N * pi2 * branches.D1[i] * branches.D2[i]));
    t.center = Vec4(b.x0[i], b.y0[i], 0.0, 0.0);
    t.precision = Vec4(k.beta, k.beta, k.alpha, k.alpha).asDiagonal();
    push_fringes(out, i, t, b.gamma1[i], b.gamma2[i]);
  }
  return out;
}

namespace {

StateComponents diffusion_components(double rate, double t, const Params& params,
                                     const BranchSet& branches) {
  const InternalConstants& k = params.internal();
  const auto& b = branches.internal;
  const double spread = internal_diffusion(rate, params) * t;
  const double alpha_t = k.alpha / (1.0 + 2.0 * k.alpha * spread);
  const double shrink = alpha_t / k.alpha;
  StateComponents out;
  for (int i = 0; i < kBranchCount; ++i) {
    const double g2 = b.gamma1[i] * b.gamma1[i] + b.gamma2[i] * b.gamma2[i];
    Term4 term;
    term.log_weight = std::log(k.beta / std::numbers::pi * 4.0 * alpha_t /
                               (k.norm_N * std::numbers::pi * branches.D1[i] * branches.D2[i])) -
                      spread * alpha_t * g2 / (2.0 * k.alpha);
    const double kick = b.F[i] * t;
    term.center = Vec4(b.x0[i], b.y0[i], kick, -kick);
    term.precision = Vec4(k.beta, k.beta, alpha_t, alpha_t).asDiagonal();
    push_fringes(out, i, term, shrink * b.gamma1[i], shrink * b.gamma2[i]);
  }
  return out;
}

}  // namespace

StateComponents evolved_components(const EvolutionKind& kind, double t, const Params& params,
                                   const BranchSet& branches) {
  switch (kind.tag) {
    case EvolutionKind::Tag::Taylor:
    case EvolutionKind::Tag::Fit: {
      const AffineMap4 forward =
          kind.tag == EvolutionKind::Tag::Taylor ? flow_taylor(t, params) : flow_fit(t, params);
      const AffineMap4 backward = forward.inverse();
      StateComponents out = initial_components(params, branches);
      for (auto& c : out) c.term = pull_back(c.term, backward);
      return out;
    }
    case EvolutionKind::Tag::Stepwise: {
      StateComponents out = initial_components(params, branches);
      for (auto& c : out) {
        const double kick = branches.internal.F[c.branch] * t;
        c.term = pull_back(c.term, AffineMap4(Mat4::Identity(), Vec4(0.0, 0.0, -kick, kick)));
      }
      return out;
    }
    case EvolutionKind::Tag::StepwiseDiffusion:
      return diffusion_components(kind.diffusion, t, params, branches);
    case EvolutionKind::Tag::QuantumReference:
      break;
  }
  throw MethodUnsupported("the quantum reference model has no phase-space representation");
}

double evaluate(const StateComponents& components, const Vec4& z) {
  double sum = 0.0;
  for (const auto& c : components) sum += c.term(z).real();
  return sum;
}

std::vector<Term2> particle2_marginal(const StateComponents& components) {
  std::vector<Term2> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(marginalize<2, 4>(c.term, {1, 3}));
  return out;
}

std::vector<Term2> momentum_marginal(const StateComponents& components) {
  std::vector<Term2> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(marginalize<2, 4>(c.term, {2, 3}));
  return out;
}

}  // namespace wigrav
