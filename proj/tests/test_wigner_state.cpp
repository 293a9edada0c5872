#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "wigrav/errors.hpp"
#include "wigrav/gaussian_term.hpp"
#include "wigrav/phase_space_quadrature.hpp"
#include "wigrav/phase_space_terms.hpp"
#include "wigrav/quadrature.hpp"
#include "wigrav/wigner_state.hpp"

using namespace wigrav;
using wigrav::testing::rel_diff;

namespace {

// Single-particle function written directly in SI units.
double oracle_single(double q, double p, const Params& P) {
  const double s = P.sigma(), h = P.hbar(), dx = P.delta_x();
  const double env = std::exp(-2.0 * s * s * p * p / (h * h));
  const double lobes = std::exp(-(q + dx / 2) * (q + dx / 2) / (2 * s * s)) +
                       std::exp(-(q - dx / 2) * (q - dx / 2) / (2 * s * s)) +
                       2.0 * std::exp(-q * q / (2 * s * s)) * std::cos(dx * p / h);
  return env * lobes / (std::numbers::pi * h * std::sqrt(P.norm_N()));
}

// Branch term written directly in SI units from the branch arrays.
double oracle_branch(int i, const PhasePoint& z, const Params& P, const BranchSet& b) {
  const double a = z.x1 - b.x0[i], c = z.x2 - b.y0[i];
  const double h = P.hbar();
  const double pre = 4.0 / (P.norm_N() * std::numbers::pi * std::numbers::pi * h * h);
  return pre * std::exp(-P.beta() * (a * a + c * c) - P.alpha() * (z.p1 * z.p1 + z.p2 * z.p2)) *
         std::cos(b.gamma1[i] * z.p1) * std::cos(b.gamma2[i] * z.p2) / (b.D1[i] * b.D2[i]);
}

}  // namespace

TEST_CASE("branch arrays") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  const BranchSet::Array d1{2, 2, 2, 2, 2, 2, 1, 1, 1};
  const BranchSet::Array d2{2, 2, 1, 2, 2, 1, 2, 2, 1};
  CHECK(b.D1 == d1);
  CHECK(b.D2 == d2);
  for (int j = 1; j <= 9; ++j) {
    const int i = j - 1;
    CHECK((b.gamma1[i] != 0.0) == (j >= 7));
    CHECK((b.gamma2[i] != 0.0) == (j % 3 == 0));
    if (b.gamma1[i] != 0.0) CHECK(b.gamma1[i] == p.delta_x() / p.hbar());
    if (b.gamma2[i] != 0.0) CHECK(b.gamma2[i] == p.delta_x() / p.hbar());
  }
}

TEST_CASE("branch distances and forces") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  const double d = p.d(), dx = p.delta_x();
  const double expected[] = {d - dx, d - dx / 2, d, d + dx / 2, d + dx};
  std::set<long long> seen;
  for (int i = 0; i < 9; ++i) {
    bool match = false;
    for (double e : expected) match = match || rel_diff(b.xbar[i], e) < 1e-14;
    CHECK(match);
    seen.insert(std::llround(b.xbar[i] * 1e9));
  }
  CHECK(seen.size() == 5);
  for (int j : {1, 5, 9}) CHECK(rel_diff(b.xbar[j - 1], d) < 1e-14);
  for (int i = 0; i < 9; ++i) {
    for (int k = 0; k < 9; ++k) {
      if (b.xbar[i] < b.xbar[k] * (1 - 1e-12)) CHECK(b.F[i] > b.F[k]);
    }
  }
}

TEST_CASE("single-particle function at the origin") {
  const Params p = Params::defaults();
  const double expected = (2.0 * std::exp(-78.125) + 2.0) /
                          (std::numbers::pi * p.hbar() * std::sqrt(p.norm_N()));
  CHECK(rel_diff(single_particle_wigner(0.0, 0.0, p), expected) < 1e-13);
}

TEST_CASE("single-particle function matches a direct SI evaluation") {
  const Params p = Params::defaults();
  for (double q : {-1.3e-4, -2e-5, 0.0, 7e-6, 1.25e-4}) {
    for (double k : {-2.0, -0.3, 0.0, 0.11, 1.7}) {
      const double mom = k * p.hbar() / p.sigma();
      const double a = single_particle_wigner(q, mom, p);
      const double b = oracle_single(q, mom, p);
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(oracle_single(0, 0, p)));
    }
  }
}

TEST_CASE("single-particle function is negative at the first fringe trough") {
  const Params p = Params::defaults();
  CHECK(single_particle_wigner(0.0, std::numbers::pi * p.hbar() / p.delta_x(), p) < 0.0);
}

TEST_CASE("single-particle function is normalized") {
  const Params p = Params::defaults();
  const InternalConstants& k = p.internal();
  QuadratureSpec2 spec;
  spec.axes[0] = {0.0, k.delta_x / 2 + 8.0, 256};
  spec.axes[1] = {0.0, 4.0, 512};
  const double total = integrate_2d(
      [&](double q, double mom) { return internal::single_particle_wigner(q, mom, k); }, spec);
  CHECK(std::abs(total - 1.0) < 1e-8);
  const double purity = 2.0 * std::numbers::pi * integrate_2d(
      [&](double q, double mom) {
        const double w = internal::single_particle_wigner(q, mom, k);
        return w * w;
      },
      spec);
  CHECK(std::abs(purity - 1.0) < 1e-8);
}

TEST_CASE("branch term at the centre of branch 1") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  const PhasePoint pt{b.x0[0], b.y0[0], 0.0, 0.0};
  const double expected = 1.0 / (p.norm_N() * std::numbers::pi * std::numbers::pi * p.hbar() * p.hbar());
  CHECK(rel_diff(branch_term(1, pt, p, b), expected) < 1e-13);
}

TEST_CASE("branch 9 is negative at a momentum fringe trough") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  const PhasePoint pt{-p.d() / 2, p.d() / 2, std::numbers::pi * p.hbar() / p.delta_x(), 0.0};
  const double w = branch_term(9, pt, p, b);
  CHECK(w < 0.0);
  CHECK(rel_diff(w, oracle_branch(8, pt, p, b)) < 1e-12);
}

TEST_CASE("branch terms agree with a direct SI evaluation") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  wigrav::testing::PointSampler sampler(p, 7);
  const double scale = oracle_branch(0, {b.x0[0], b.y0[0], 0, 0}, p, b);
  for (int n = 0; n < 50; ++n) {
    const PhasePoint pt = sampler.next();
    for (int j = 1; j <= 9; ++j) {
      CHECK(std::abs(branch_term(j, pt, p, b) - oracle_branch(j - 1, pt, p, b)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("branch index bounds") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  CHECK_THROWS_AS(branch_term(0, {}, p, b), IndexOutOfRange);
  CHECK_THROWS_AS(branch_term(10, {}, p, b), IndexOutOfRange);
  CHECK_NOTHROW(branch_term(9, {}, p, b));
}

TEST_CASE("nine-branch sum equals the product form") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  wigrav::testing::PointSampler sampler(p, 99);
  for (int n = 0; n < 100; ++n) {
    const PhasePoint pt = sampler.next();
    double sum = 0.0;
    double magnitude = 0.0;
    for (int j = 1; j <= 9; ++j) {
      const double w = branch_term(j, pt, p, b);
      sum += w;
      magnitude += std::abs(w);
    }
    const double product = initial_wigner(pt, p);
    const double direct =
        oracle_single(pt.x1 + p.d() / 2, pt.p1, p) * oracle_single(pt.x2 - p.d() / 2, pt.p2, p);
    CHECK(std::abs(sum - product) <= 1e-12 * magnitude);
    CHECK(std::abs(direct - product) <= 1e-12 * magnitude);
  }
}

TEST_CASE("initial state at the centre is the product of single-particle maxima") {
  const Params p = Params::defaults();
  const double top = single_particle_wigner(0.0, 0.0, p);
  CHECK(rel_diff(initial_wigner({-p.d() / 2, p.d() / 2, 0, 0}, p), top * top) < 1e-13);
}

TEST_CASE("initial state is symmetric under particle exchange with reflection") {
  const Params p = Params::defaults();
  wigrav::testing::PointSampler sampler(p, 5);
  for (int n = 0; n < 100; ++n) {
    const PhasePoint pt = sampler.next();
    const PhasePoint swapped{-pt.x2, -pt.x1, -pt.p2, -pt.p1};
    const double a = initial_wigner(pt, p);
    const double b = initial_wigner(swapped, p);
    CHECK(std::abs(a - b) <= 1e-13 * initial_wigner({-p.d() / 2, p.d() / 2, 0, 0}, p));
  }
}

TEST_CASE("initial components reproduce the branch terms") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  const StateComponents comps = initial_components(p, b);
  CHECK(comps.size() == 10);
  wigrav::testing::PointSampler sampler(p, 3);
  for (int n = 0; n < 50; ++n) {
    const PhasePoint pt = sampler.next();
    const double w = evaluate(comps, to_internal(pt, p));
    const double expected = p.units().density_to_internal(initial_wigner(pt, p), 2);
    CHECK(std::abs(w - expected) < 1e-12 * 0.03);
  }
}

TEST_CASE("initial state is normalized over the default windows") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  const StateComponents comps = initial_components(p, b);
  CHECK(std::abs(integrate_components_4d(comps, QuadratureSettings{}, p) - 1.0) < 1e-6);
  double analytic = 0.0;
  for (const auto& c : comps) analytic += c.term.integral().real();
  CHECK(std::abs(analytic - 1.0) < 1e-12);
}

TEST_CASE("position and momentum marginals of the initial state are non-negative") {
  const Params p = Params::defaults();
  const StateComponents comps = initial_components(p, BranchSet::build(p));
  const std::vector<Term2> mom = momentum_marginal(comps);
  std::vector<Term2> pos;
  for (const auto& c : comps) pos.push_back(marginalize<2, 4>(c.term, {0, 1}));
  const InternalConstants& k = p.internal();
  double lowest_mom = 1.0, lowest_pos = 1.0;
  for (int i = -60; i <= 60; ++i) {
    for (int j = -60; j <= 60; ++j) {
      const Eigen::Vector2d q(i * 0.05, j * 0.05);
      double w = 0.0;
      for (const auto& t : mom) w += t(q).real();
      lowest_mom = std::min(lowest_mom, w);
      const Eigen::Vector2d x(-k.d / 2 + i * 0.5, k.d / 2 + j * 0.5);
      double v = 0.0;
      for (const auto& t : pos) v += t(x).real();
      lowest_pos = std::min(lowest_pos, v);
    }
  }
  CHECK(lowest_mom >= -1e-15);
  CHECK(lowest_pos >= -1e-15);
}
