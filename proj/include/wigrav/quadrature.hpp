#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "wigrav/errors.hpp"
#include "wigrav/params.hpp"

namespace wigrav {

enum class Rule { GaussLegendre, Trapezoid };

Rule parse_rule(const std::string& name);
const char* to_string(Rule rule);

/// One integration axis: window [center - half_width, center + half_width].
struct Axis {
  double center = 0.0;
  double half_width = 1.0;
  int nodes = 64;

  double lower() const { return center - half_width; }
  double upper() const { return center + half_width; }
  double mean_spacing() const { return 2.0 * half_width / nodes; }
};

struct Nodes {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
const Nodes& gauss_legendre(int n);

/// Quadrature nodes for one axis. Throws SpecViolation for fewer than 8
/// nodes or a non-positive or non-finite window.
Nodes axis_nodes(const Axis& axis, Rule rule);

template <std::size_t Dim>
struct QuadratureSpec {
  std::array<Axis, Dim> axes{};
  Rule rule = Rule::GaussLegendre;

  void validate() const {
    for (const Axis& a : axes) axis_nodes(a, rule);
  }
};

using QuadratureSpec2 = QuadratureSpec<2>;
using QuadratureSpec4 = QuadratureSpec<4>;

/// Tensor-product quadrature of f(a, b). The summation order is fixed.
template <class F>
double integrate_2d(F&& f, const QuadratureSpec2& spec) {
  const Nodes na = axis_nodes(spec.axes[0], spec.rule);
  const Nodes nb = axis_nodes(spec.axes[1], spec.rule);
  double total = 0.0;
  for (std::size_t i = 0; i < na.x.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < nb.x.size(); ++j) row += nb.w[j] * f(na.x[i], nb.x[j]);
    total += na.w[i] * row;
  }
  return total;
}

/// Tensor-product quadrature of f(a, b, c, d).
template <class F>
double integrate_4d(F&& f, const QuadratureSpec4& spec) {
  std::array<Nodes, 4> n;
  for (int k = 0; k < 4; ++k) n[k] = axis_nodes(spec.axes[k], spec.rule);
  double total = 0.0;
  for (std::size_t i = 0; i < n[0].x.size(); ++i) {
    double s1 = 0.0;
    for (std::size_t j = 0; j < n[1].x.size(); ++j) {
      double s2 = 0.0;
      for (std::size_t k = 0; k < n[2].x.size(); ++k) {
        double s3 = 0.0;
        for (std::size_t l = 0; l < n[3].x.size(); ++l) {
          s3 += n[3].w[l] * f(n[0].x[i], n[1].x[j], n[2].x[k], n[3].x[l]);
        }
        s2 += n[2].w[k] * s3;
      }
      s1 += n[1].w[j] * s2;
    }
    total += n[0].w[i] * s1;
  }
  return total;
}

/// Node budget for phase-space integrals. Counts apply to one
/// branch-centered window per axis.
struct QuadratureSettings {
  int pos_nodes = 96;
  int mom_nodes = 512;
  Rule rule = Rule::GaussLegendre;
  double pos_half_width = 8.0;  // [sigma]
  double mom_half_width = 4.0;  // [hbar/sigma]
};

/// Resolution limits implied by the fringe and lobe scales, in internal units.
struct ResolutionLimits {
  double max_momentum_spacing;   // (pi/8) hbar/delta_x
  double min_momentum_half_width;  // 8 hbar/(2 sigma)
  double min_position_half_width;  // 6 sigma past the lobe center
};

ResolutionLimits resolution_limits(const Params& params);

/// Builds a position or momentum axis with the node density of `s`.
/// Throws SpecViolation if the result breaks the resolution limits.
Axis position_axis(double center, double half_width, const QuadratureSettings& s,
                   const Params& params);
Axis momentum_axis(double center, double half_width, const QuadratureSettings& s,
                   const Params& params);

/// Throws SpecViolation if an axis breaks the resolution limits.
void check_position_axis(const Axis& axis, const Params& params);
void check_momentum_axis(const Axis& axis, const Params& params);

}  // namespace wigrav
