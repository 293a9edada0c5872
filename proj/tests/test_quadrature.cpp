#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "wigrav/errors.hpp"
#include "wigrav/phase_space_quadrature.hpp"
#include "wigrav/phase_space_terms.hpp"
#include "wigrav/quadrature.hpp"
#include "wigrav/wigner_state.hpp"

using namespace wigrav;
using wigrav::testing::rel_diff;

namespace {

double gauss2(double a, double b) { return std::exp(-0.5 * (a * a + b * b)) / (2 * std::numbers::pi); }

QuadratureSpec2 square(double half, int nodes, Rule rule = Rule::GaussLegendre) {
  QuadratureSpec2 s;
  s.axes[0] = {0.0, half, nodes};
  s.axes[1] = {0.0, half, nodes};
  s.rule = rule;
  return s;
}

}  // namespace

TEST_CASE("Gauss-Legendre nodes") {
  for (int n : {8, 9, 64, 512}) {
    const Nodes& g = gauss_legendre(n);
    REQUIRE(g.x.size() == static_cast<std::size_t>(n));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += g.w[i];
      CHECK(std::abs(g.x[i] + g.x[n - 1 - i]) < 1e-14);
      CHECK(g.w[i] > 0.0);
    }
    CHECK(std::abs(sum - 2.0) < 1e-13);
  }
  // n nodes are exact up to degree 2n - 1.
  const Nodes& g = gauss_legendre(8);
  for (int k = 0; k <= 15; ++k) {
    double q = 0.0;
    for (int i = 0; i < 8; ++i) q += g.w[i] * std::pow(g.x[i], k);
    const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    CHECK(std::abs(q - exact) < 1e-14);
  }
}

TEST_CASE("rule names") {
  CHECK(parse_rule("gauss-legendre") == Rule::GaussLegendre);
  CHECK(parse_rule("trapezoid") == Rule::Trapezoid);
  CHECK(std::string(to_string(Rule::Trapezoid)) == "trapezoid");
  CHECK(parse_rule(to_string(Rule::GaussLegendre)) == Rule::GaussLegendre);
  CHECK_THROWS_AS(parse_rule("simpson"), SpecViolation);
}

TEST_CASE("axis validation") {
  CHECK_THROWS_AS(axis_nodes({0.0, 1.0, 7}, Rule::GaussLegendre), SpecViolation);
  CHECK_THROWS_AS(axis_nodes({0.0, 0.0, 16}, Rule::GaussLegendre), SpecViolation);
  CHECK_THROWS_AS(axis_nodes({0.0, -1.0, 16}, Rule::Trapezoid), SpecViolation);
  CHECK_THROWS_AS(axis_nodes({0.0, std::nan(""), 16}, Rule::Trapezoid), SpecViolation);
  CHECK_THROWS_AS(axis_nodes({0.0, double(INFINITY), 16}, Rule::Trapezoid), SpecViolation);
  CHECK_NOTHROW(axis_nodes({0.0, 1.0, 8}, Rule::GaussLegendre));
  CHECK_THROWS_AS(integrate_2d(gauss2, square(8.0, 4)), SpecViolation);
}

TEST_CASE("unit Gaussian over +-8 standard deviations") {
  CHECK(std::abs(integrate_2d(gauss2, square(8.0, 64)) - 1.0) < 1e-10);
  CHECK(std::abs(integrate_2d(gauss2, square(8.0, 64, Rule::Trapezoid)) - 1.0) < 1e-10);
}

TEST_CASE("Gaussian times a fast cosine") {
  const double exact = std::sqrt(std::numbers::pi) * std::exp(-156.25);
  QuadratureSpec2 spec = square(8.0, 256);
  spec.axes[1] = {0.0, 1.0, 8};
  const double v = integrate_2d([](double a, double) { return std::exp(-a * a) * std::cos(25 * a) / 2.0; }, spec);
  CHECK(std::abs(v - exact) < 1e-12);
}

TEST_CASE("odd integrand over a symmetric window") {
  const double v = integrate_2d([](double a, double b) { return a * std::exp(-a * a - b * b) * (1 + b); },
                                square(6.0, 48));
  CHECK(std::abs(v) < 1e-12);
  const double w = integrate_2d([](double a, double b) { return std::sin(3 * a) * std::cos(b); },
                                square(5.0, 40, Rule::Trapezoid));
  CHECK(std::abs(w) < 1e-12);
}

TEST_CASE("quadrature is deterministic") {
  auto f = [](double a, double b) { return std::exp(-a * a) * std::cos(7 * a * b); };
  const double a = integrate_2d(f, square(5.0, 200));
  const double b = integrate_2d(f, square(5.0, 200));
  CHECK(a == b);
}

TEST_CASE("4D product of normalized Gaussians") {
  QuadratureSpec4 spec;
  for (auto& a : spec.axes) a = {0.0, 8.0, 40};
  spec.axes[2].center = 1.0;
  spec.axes[2].half_width = 9.0;
  const double v = integrate_4d(
      [](double a, double b, double c, double d) { return gauss2(a, b) * gauss2(c - 1.0, d); }, spec);
  CHECK(std::abs(v - 1.0) < 1e-9);
}

TEST_CASE("4D evaluation order does not matter") {
  auto f = [](double a, double b, double c, double d) {
    return std::exp(-a * a - 0.5 * b * b - 2 * c * c - d * d) * std::cos(a + 2 * d) * (1 + 0.1 * b * c);
  };
  QuadratureSpec4 spec;
  spec.axes[0] = {0.0, 6.0, 40};
  spec.axes[1] = {0.5, 8.0, 48};
  spec.axes[2] = {0.0, 4.0, 32};
  spec.axes[3] = {-0.2, 6.0, 40};
  const double direct = integrate_4d(f, spec);
  QuadratureSpec4 swapped;
  swapped.axes = {spec.axes[3], spec.axes[2], spec.axes[1], spec.axes[0]};
  const double reversed = integrate_4d([&](double d, double c, double b, double a) { return f(a, b, c, d); }, swapped);
  CHECK(std::abs(direct - reversed) <= 1e-13);
  const double exact = std::pow(std::numbers::pi, 2) * std::exp(-0.25 - 1.0);
  CHECK(rel_diff(direct, exact) < 1e-10);
}

TEST_CASE("branch-wise integration is linear") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  const InternalConstants& k = p.internal();
  QuadratureSpec4 spec;
  spec.axes[0] = {-k.d / 2, k.delta_x / 2 + 8.0, 20};
  spec.axes[1] = {k.d / 2, k.delta_x / 2 + 8.0, 20};
  spec.axes[2] = {0.0, 4.0, 40};
  spec.axes[3] = {0.0, 4.0, 40};
  double per_branch = 0.0;
  for (int i = 0; i < kBranchCount; ++i) {
    per_branch += integrate_4d(
        [&](double x1, double x2, double p1, double p2) {
          return internal::branch_term(i, x1, x2, p1, p2, k, b);
        },
        spec);
  }
  const double summed = integrate_4d(
      [&](double x1, double x2, double p1, double p2) {
        double s = 0.0;
        for (int i = 0; i < kBranchCount; ++i) s += internal::branch_term(i, x1, x2, p1, p2, k, b);
        return s;
      },
      spec);
  CHECK(std::abs(per_branch - summed) < 1e-10);
}

TEST_CASE("resolution limits on phase-space axes") {
  const Params p = Params::defaults();
  const QuadratureSettings s;
  const ResolutionLimits lim = resolution_limits(p);
  CHECK(rel_diff(lim.max_momentum_spacing, std::numbers::pi / 8.0 * p.sigma() / p.delta_x()) < 1e-14);
  CHECK(lim.min_momentum_half_width == 4.0);
  CHECK(lim.min_position_half_width == 6.0);

  CHECK_NOTHROW(position_axis(0.0, 8.0, s, p));
  CHECK_NOTHROW(momentum_axis(0.0, 4.0, s, p));
  CHECK_THROWS_AS(position_axis(0.0, 5.0, s, p), SpecViolation);
  CHECK_THROWS_AS(momentum_axis(0.0, 3.0, s, p), SpecViolation);
  QuadratureSettings coarse;
  coarse.mom_nodes = 256;
  CHECK_THROWS_AS(momentum_axis(0.0, 4.0, coarse, p), SpecViolation);
  // Node counts are densities: a window twice as wide gets twice the nodes.
  CHECK(momentum_axis(0.0, 8.0, s, p).nodes == 1024);
  CHECK(position_axis(0.0, 16.0, s, p).nodes == 192);
  CHECK(position_axis(0.0, 6.0, s, p).nodes == 96);
}

TEST_CASE("structured marginal agrees with pointwise evaluation") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  const StateComponents comps = evolved_components(EvolutionKind::fit(), 10.0, p, b);
  for (const BranchComponent& c : comps) {
    const Term4& t = c.term;
    const Nodes x1 = axis_nodes({t.center(0), 8.0, 16}, Rule::GaussLegendre);
    const Nodes p1 = axis_nodes({t.center(2), 4.0, 64}, Rule::GaussLegendre);
    const Nodes x2 = axis_nodes({t.center(1), 8.0, 9}, Rule::GaussLegendre);
    const Nodes p2 = axis_nodes({t.center(3), 4.0, 11}, Rule::Trapezoid);
    const Eigen::MatrixXd m = inner_marginal(t, x1, p1, x2, p2);
    REQUIRE(m.rows() == 9);
    REQUIRE(m.cols() == 11);
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < x2.x.size(); ++i) {
      for (std::size_t j = 0; j < p2.x.size(); ++j) {
        double brute = 0.0;
        for (std::size_t a = 0; a < x1.x.size(); ++a) {
          for (std::size_t c2 = 0; c2 < p1.x.size(); ++c2) {
            brute += x1.w[a] * p1.w[c2] * t(Vec4(x1.x[a], x2.x[i], p1.x[c2], p2.x[j])).real();
          }
        }
        scale = std::max(scale, std::abs(brute));
        worst = std::max(worst, std::abs(brute - m(i, j)));
      }
    }
    CHECK(worst <= 1e-12 * std::max(scale, 1e-300));
  }
}

TEST_CASE("grid values agree with pointwise evaluation") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  const std::vector<Term2> terms =
      momentum_marginal(evolved_components(EvolutionKind::taylor(), 2.5, p, b));
  const Nodes a = axis_nodes({0.0, 4.0, 33}, Rule::GaussLegendre);
  const Nodes c = axis_nodes({0.1, 3.0, 17}, Rule::Trapezoid);
  const Eigen::MatrixXd v = grid_values(terms, a, c);
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    for (std::size_t j = 0; j < c.x.size(); ++j) {
      double w = 0.0;
      for (const Term2& t : terms) w += t(Eigen::Vector2d(a.x[i], c.x[j])).real();
      CHECK(std::abs(v(i, j) - w) <= 1e-13);
    }
  }
}

TEST_CASE("structured 4D integral agrees with the pointwise engine") {
  const Params p = Params::defaults();
  const BranchSet b = BranchSet::build(p);
  const StateComponents comps = evolved_components(EvolutionKind::taylor(), 2.5, p, b);
  double exact = 0.0;
  for (const BranchComponent& c : comps) exact += c.term.integral().real();
  CHECK(std::abs(exact - 1.0) < 1e-12);
  CHECK(std::abs(integrate_components_4d(comps, QuadratureSettings{}, p) - exact) < 1e-8);
  // Pointwise engine on one component at reduced size.
  const BranchComponent& c = comps.back();
  const TermWindow w = term_window(c.term, QuadratureSettings{});
  QuadratureSpec4 spec;
  for (int i = 0; i < 4; ++i) spec.axes[i] = {w.center(i), w.half_width(i), i < 2 ? 24 : 200};
  const double pointwise = integrate_4d(
      [&](double x1, double x2, double p1, double p2) { return c.term(Vec4(x1, x2, p1, p2)).real(); },
      spec);
  CHECK(std::abs(pointwise - c.term.integral().real()) < 1e-8);
}

TEST_CASE("purity of the initial particle-2 marginal is one") {
  const Params p = Params::defaults();
  const StateComponents comps = initial_components(p, BranchSet::build(p));
  CHECK(std::abs(marginal_purity_quadrature(comps, QuadratureSettings{}, p) - 1.0) < 1e-6);
}
