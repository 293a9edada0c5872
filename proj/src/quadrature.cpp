#include "wigrav/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace wigrav {

Rule parse_rule(const std::string& name) {
  if (name == "gauss-legendre" || name == "gl" || name == "GaussLegendre") return Rule::GaussLegendre;
  if (name == "trapezoid" || name == "Trapezoid") return Rule::Trapezoid;
  throw SpecViolation("unknown quadrature rule '" + name + "'");
}

const char* to_string(Rule rule) {
  return rule == Rule::GaussLegendre ? "gauss-legendre" : "trapezoid";
}

namespace {

Nodes compute_gauss_legendre(int n) {
  Nodes out;
  out.x.resize(n);
  out.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out.x[i] = -x;
    out.x[n - 1 - i] = x;
    out.w[i] = w;
    out.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) out.x[n / 2] = 0.0;
  return out;
}

}  // namespace

const Nodes& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Nodes>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Nodes>(compute_gauss_legendre(n));
  return *slot;
}

Nodes axis_nodes(const Axis& axis, Rule rule) {
  if (axis.nodes < 8) throw SpecViolation("quadrature axes need at least 8 nodes");
  if (!std::isfinite(axis.center) || !std::isfinite(axis.half_width) || !(axis.half_width > 0.0)) {
    throw SpecViolation("quadrature window must be finite with positive half-width");
  }
  Nodes out;
  const int n = axis.nodes;
  out.x.resize(n);
  out.w.resize(n);
  if (rule == Rule::GaussLegendre) {
    const Nodes& ref = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
      out.x[i] = axis.center + axis.half_width * ref.x[i];
      out.w[i] = axis.half_width * ref.w[i];
    }
  } else {
    const double h = 2.0 * axis.half_width / (n - 1);
    for (int i = 0; i < n; ++i) {
      out.x[i] = axis.lower() + h * i;
      out.w[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
    }
  }
  return out;
}

ResolutionLimits resolution_limits(const Params& params) {
  const InternalConstants& k = params.internal();
  return {std::numbers::pi / 8.0 / k.delta_x, 4.0, 6.0};
}

namespace {

// Node counts in QuadratureSettings are densities for the reference window;
// wider windows get proportionally more nodes.
int scaled_nodes(int nodes, double half_width, double reference) {
  return std::max(nodes, static_cast<int>(std::ceil(nodes * half_width / reference - 1e-9)));
}

}  // namespace

Axis position_axis(double center, double half_width, const QuadratureSettings& s,
                   const Params& params) {
  Axis a{center, half_width, scaled_nodes(s.pos_nodes, half_width, s.pos_half_width)};
  check_position_axis(a, params);
  return a;
}

Axis momentum_axis(double center, double half_width, const QuadratureSettings& s,
                   const Params& params) {
  Axis a{center, half_width, scaled_nodes(s.mom_nodes, half_width, s.mom_half_width)};
  check_momentum_axis(a, params);
  return a;
}

void check_position_axis(const Axis& axis, const Params& params) {
  axis_nodes(axis, Rule::Trapezoid);
  if (axis.half_width < resolution_limits(params).min_position_half_width) {
    throw SpecViolation("position window must extend at least 6 sigma past the lobe center");
  }
}

void check_momentum_axis(const Axis& axis, const Params& params) {
  axis_nodes(axis, Rule::Trapezoid);
  const ResolutionLimits lim = resolution_limits(params);
  if (axis.half_width < lim.min_momentum_half_width) {
    throw SpecViolation("momentum window must span at least 8 hbar/(2 sigma)");
  }
  if (axis.mean_spacing() > lim.max_momentum_spacing * (1.0 + 1e-12)) {
    throw SpecViolation("momentum nodes must resolve 16 points per fringe period");
  }
}

}  // namespace wigrav
