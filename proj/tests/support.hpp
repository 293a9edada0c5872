#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "wigrav/dynamics.hpp"
#include "wigrav/params.hpp"
#include "wigrav/phase_space_terms.hpp"
#include "wigrav/quadrature.hpp"

namespace wigrav::testing {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Points spread over the nine branch lobes: positions within 4 sigma of a
/// lobe centre, momenta within 3 hbar/sigma.
class PointSampler {
 public:
  explicit PointSampler(const Params& p, unsigned seed = 12345) : p_(p), rng_(seed) {}

  PhasePoint next() {
    std::uniform_int_distribution<int> lobe(-1, 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double s = p_.sigma();
    const double pu = p_.hbar() / s;
    PhasePoint pt;
    pt.x1 = -p_.d() / 2.0 + lobe(rng_) * p_.delta_x() / 2.0 + 4.0 * s * u(rng_);
    pt.x2 = p_.d() / 2.0 + lobe(rng_) * p_.delta_x() / 2.0 + 4.0 * s * u(rng_);
    pt.p1 = 3.0 * pu * u(rng_);
    pt.p2 = 3.0 * pu * u(rng_);
    return pt;
  }

 private:
  Params p_;
  std::mt19937_64 rng_;
};

/// 1D Gauss-Legendre integral of f over [c - h, c + h].
template <class F>
double gl1(F f, double c, double h, int n = 400) {
  const Nodes& g = gauss_legendre(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += g.w[i] * h * f(c + h * g.x[i]);
  return s;
}

/// Oracle for the global purity under stepwise evolution with diffusion:
/// (2 pi)^2 sum_j int w_j^2 in internal units, cross-branch products
/// dropped. Each squared branch is a product of four 1D factors.
inline double global_purity_oracle(double t, double rate, const Params& p, const BranchSet& b) {
  const InternalConstants& k = p.internal();
  const double spread = internal_diffusion(rate, p) * t;
  const double at = k.alpha / (1.0 + 2.0 * k.alpha * spread);
  const double shrink = at / k.alpha;
  const double pos = gl1([&](double a) { return std::exp(-2.0 * k.beta * a * a); }, 0.0, 10.0);
  auto mom = [&](double g) {
    return gl1([&](double q) {
      const double c = std::cos(shrink * g * q);
      return std::exp(-2.0 * at * q * q) * c * c;
    }, 0.0, 6.0, 800);
  };
  double total = 0.0;
  for (int i = 0; i < kBranchCount; ++i) {
    const double g1 = b.internal.gamma1[i], g2 = b.internal.gamma2[i];
    const double amp = k.beta / std::numbers::pi * 4.0 * at / (k.norm_N * std::numbers::pi) *
                       std::exp(-spread * at * (g1 * g1 + g2 * g2) / (2.0 * k.alpha)) /
                       (b.D1[i] * b.D2[i]);
    total += amp * amp * pos * pos * mom(g1) * mom(g2);
  }
  return 4.0 * std::numbers::pi * std::numbers::pi * total;
}

}  // namespace wigrav::testing
