#include "wigrav/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "wigrav/errors.hpp"
#include "wigrav/phase_space_quadrature.hpp"
#include "wigrav/phase_space_terms.hpp"

namespace wigrav {

PhaseRates PhaseRates::from(const Params& params) {
  const double g = params.kappa() / params.hbar();
  PhaseRates r;
  r.rate_phi = g / params.d();
  r.rate_LR = g / (params.d() + params.delta_x());
  r.rate_RL = g / (params.d() - params.delta_x());
  r.delta_LR = r.rate_LR - r.rate_phi;
  r.delta_RL = r.rate_RL - r.rate_phi;
  return r;
}

void TimeSeries::push(double t, double value) {
  if (!std::isfinite(t) || !std::isfinite(value)) {
    throw std::invalid_argument(label_ + ": non-finite sample");
  }
  if (!samples_.empty() && t <= samples_.back().first) {
    throw std::invalid_argument(label_ + ": sample times must increase strictly");
  }
  samples_.emplace_back(t, value);
}

PurityMethod parse_purity_method(const std::string& name) {
  if (name == "quadrature") return PurityMethod::Quadrature;
  if (name == "gaussian_analytic" || name == "gaussian-analytic" || name == "analytic") {
    return PurityMethod::GaussianAnalytic;
  }
  throw std::invalid_argument("unknown purity method '" + name + "'");
}

const char* to_string(PurityMethod method) {
  return method == PurityMethod::Quadrature ? "quadrature" : "gaussian_analytic";
}

double quantum_purity(double t, const Params& params) {
  const PhaseRates r = PhaseRates::from(params);
  return (3.0 + std::cos((r.delta_LR + r.delta_RL) * t)) / 4.0;
}

namespace {

struct DiffusionScales {
  double spread;   // D t in (hbar/sigma)^2
  double alpha_t;  // alpha / (1 + 2 alpha D t)
};

DiffusionScales diffusion_scales(double t, double rate, const Params& params) {
  const double spread = internal_diffusion(rate, params) * t;
  const double alpha = params.internal().alpha;
  return {spread, alpha / (1.0 + 2.0 * alpha * spread)};
}

// Reduced diffusion branch with the x1, p1 bracket set to 1 for branches
// without p1 fringes and 0 otherwise. Internal units.
double reduced_diffusion_branch(int i, double x2, double p2, double t, const DiffusionScales& s,
                                const Params& params, const BranchSet& branches) {
  const auto& b = branches.internal;
  if (b.gamma1[i] != 0.0) return 0.0;
  const InternalConstants& k = params.internal();
  const double c = x2 - b.y0[i];
  const double q = p2 + b.F[i] * t;
  const double g2 = b.gamma2[i];
  return std::sqrt(k.beta * s.alpha_t) / std::numbers::pi *
         std::exp(-k.beta * c * c - s.alpha_t * q * q - s.spread * s.alpha_t * g2 * g2 / (2.0 * k.alpha)) *
         std::cos(s.alpha_t / k.alpha * g2 * q) / (2.0 * branches.D2[i]);
}

double reduced_diffusion(double x2, double p2, double t, const DiffusionScales& s,
                         const Params& params, const BranchSet& branches) {
  double sum = 0.0;
  for (int i = 0; i < kBranchCount; ++i) {
    sum += reduced_diffusion_branch(i, x2, p2, t, s, params, branches);
  }
  return sum;
}

double diffusion_purity_quadrature(double t, double rate, const Params& params,
                                   const QuadratureSettings& settings) {
  const BranchSet branches = BranchSet::build(params);
  const DiffusionScales s = diffusion_scales(t, rate, params);
  const double mom_half =
      std::max(settings.mom_half_width, 8.0 / std::sqrt(2.0 * s.alpha_t));
  std::set<double> lobes(branches.internal.y0.begin(), branches.internal.y0.end());
  double total = 0.0;
  for (double y0 : lobes) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < kBranchCount; ++i) {
      if (branches.internal.y0[i] != y0) continue;
      const double centre = -branches.internal.F[i] * t;
      lo = std::min(lo, centre - mom_half);
      hi = std::max(hi, centre + mom_half);
    }
    QuadratureSpec2 spec;
    spec.rule = settings.rule;
    spec.axes[0] = position_axis(y0, settings.pos_half_width, settings, params);
    spec.axes[1] = momentum_axis(0.5 * (lo + hi), 0.5 * (hi - lo), settings, params);
    total += integrate_2d(
        [&](double x2, double p2) {
          const double w = reduced_diffusion(x2, p2, t, s, params, branches);
          return w * w;
        },
        spec);
  }
  return 2.0 * std::numbers::pi * total;
}

constexpr int kAbsOversampling = 4;

void require_classical(const EvolutionKind& kind, const char* what) {
  if (kind.tag == EvolutionKind::Tag::QuantumReference) {
    throw MethodUnsupported(std::string(what) + " is not defined for the quantum reference");
  }
}

Axis window_axis(double lo, double hi, bool momentum, const QuadratureSettings& settings,
                 const Params& params) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  return momentum ? momentum_axis(c, h, settings, params) : position_axis(c, h, settings, params);
}

}  // namespace

double marginal2(const EvolutionKind& kind, double x2, double p2, double t, const Params& params,
                 const QuadratureSettings& settings) {
  require_classical(kind, "marginal2");
  const UnitSystem& u = params.units();
  const double xi = u.length_to_internal(x2);
  const double pi = u.momentum_to_internal(p2);
  const BranchSet branches = BranchSet::build(params);
  if (kind.tag == EvolutionKind::Tag::StepwiseDiffusion) {
    const DiffusionScales s = diffusion_scales(t, kind.diffusion, params);
    return u.density_to_si(reduced_diffusion(xi, pi, t, s, params, branches), 1);
  }
  const StateComponents components = evolved_components(kind, t, params, branches);
  double total = 0.0;
  for (const auto& c : components) {
    const TermWindow w = term_window(c.term, settings);
    QuadratureSpec2 spec;
    spec.rule = settings.rule;
    spec.axes[0] = window_axis(w.center(0) - w.half_width(0), w.center(0) + w.half_width(0),
                               false, settings, params);
    spec.axes[1] = window_axis(w.center(2) - w.half_width(2), w.center(2) + w.half_width(2),
                               true, settings, params);
    total += integrate_2d(
        [&](double x1, double p1) { return c.term(Vec4(x1, xi, p1, pi)).real(); }, spec);
  }
  return u.density_to_si(total, 1);
}

double marginal_purity(const EvolutionKind& kind, double t, const Params& params,
                       PurityMethod method, const QuadratureSettings& settings) {
  if (kind.tag == EvolutionKind::Tag::QuantumReference) return quantum_purity(t, params);
  if (method == PurityMethod::Quadrature && kind.tag == EvolutionKind::Tag::StepwiseDiffusion) {
    return diffusion_purity_quadrature(t, kind.diffusion, params, settings);
  }
  const StateComponents components =
      evolved_components(kind, t, params, BranchSet::build(params));
  if (method == PurityMethod::GaussianAnalytic) {
    return 2.0 * std::numbers::pi * integrate_real_square<2>(particle2_marginal(components));
  }
  return marginal_purity_quadrature(components, settings, params);
}

double negativity(const EvolutionKind& kind, double t, const Params& params,
                  const QuadratureSettings& settings) {
  require_classical(kind, "negativity");
  const StateComponents components =
      evolved_components(kind, t, params, BranchSet::build(params));
  const std::vector<Term2> terms = momentum_marginal(components);
  std::array<double, 2> lo{std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()};
  std::array<double, 2> hi{-lo[0], -lo[1]};
  for (const Term2& term : terms) {
    const Eigen::Matrix2d cov = term.covariance();
    for (int a = 0; a < 2; ++a) {
      const double h = std::max(settings.mom_half_width, 8.0 * std::sqrt(cov(a, a)));
      lo[a] = std::min(lo[a], term.center(a) - h);
      hi[a] = std::max(hi[a], term.center(a) + h);
    }
  }
  // |W| has kinks along its zero lines, so the fringe-resolving density is
  // oversampled to recover the slow algebraic convergence.
  QuadratureSettings dense = settings;
  dense.mom_nodes *= kAbsOversampling;
  std::array<Nodes, 2> n;
  for (int a = 0; a < 2; ++a) n[a] = axis_nodes(window_axis(lo[a], hi[a], true, dense, params), dense.rule);
  const Eigen::MatrixXd w = grid_values(terms, n[0], n[1]);
  const Eigen::VectorXd w0 = Eigen::Map<const Eigen::VectorXd>(n[0].w.data(), n[0].w.size());
  const Eigen::VectorXd w1 = Eigen::Map<const Eigen::VectorXd>(n[1].w.data(), n[1].w.size());
  const double l1 = w0.dot(w.cwiseAbs() * w1);
  const double nu = 0.5 * (l1 - 1.0);
  return (nu < 0.0 && nu >= -1e-12) ? 0.0 : nu;
}

double threshold_diffusion(double scale, double t, const Params& params) {
  if (!(t > 0.0)) throw std::invalid_argument("threshold diffusion needs t > 0");
  const double unit = params.hbar() / params.delta_x();
  return scale * 0.25 * unit * unit / t;
}

double gamma_factor_diffusion(int i, int j, double t, double D, const Params& params,
                              const BranchSet& branches) {
  if (i != 1 && i != 2) throw IndexOutOfRange("particle index must be 1 or 2");
  const int idx = branch_index(j);
  const DiffusionScales s = diffusion_scales(t, D, params);
  const double alpha = params.internal().alpha;
  const double g = i == 1 ? branches.internal.gamma1[idx] : branches.internal.gamma2[idx];
  const double div = i == 1 ? branches.D1[idx] : branches.D2[idx];
  return std::exp(-s.spread * s.alpha_t * g * g / alpha) /
         (2.0 * div * std::sqrt(1.0 + 2.0 * alpha * s.spread));
}

double gamma_global_diffusion(double t, double D, const Params& params, const BranchSet& branches) {
  double sum = 0.0;
  for (int j = 1; j <= kBranchCount; ++j) {
    sum += gamma_factor_diffusion(1, j, t, D, params, branches) *
           gamma_factor_diffusion(2, j, t, D, params, branches);
  }
  return sum;
}

double gamma_reduced_diffusion(double t, double D, const Params& params,
                               const BranchSet& branches) {
  const DiffusionScales s = diffusion_scales(t, D, params);
  const InternalConstants& k = params.internal();
  const auto& F = branches.internal.F;
  auto factor = [&](int j) { return gamma_factor_diffusion(2, j, t, D, params, branches); };
  auto overlap = [&](int a, int b) {
    const double df = (F[a - 1] - F[b - 1]) * t;
    return std::exp(-s.alpha_t * df * df / 2.0);
  };
  double sum = 0.0;
  for (int j = 1; j <= 6; ++j) sum += factor(j);
  const double fringe = s.alpha_t * k.delta_x / k.alpha * (F[2] - F[5]) * t;
  return 0.25 * sum + factor(1) / 2.0 * (overlap(1, 4) + overlap(2, 5)) +
         factor(3) / 2.0 * overlap(3, 6) * std::cos(fringe);
}

}  // namespace wigrav
