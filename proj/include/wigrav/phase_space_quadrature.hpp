#pragma once

#include <Eigen/Dense>

#include "wigrav/phase_space_terms.hpp"
#include "wigrav/quadrature.hpp"

namespace wigrav {

/// Integration window of one component: per-axis center and half width in
/// internal units, ordered (x1, x2, p1, p2). Each half width is the larger of
/// the configured window and eight envelope standard deviations.
struct TermWindow {
  Vec4 center;
  Vec4 half_width;
};

TermWindow term_window(const Term4& term, const QuadratureSettings& settings);

/// Values of Re int term dx1 dp1 on the outer grid x2 x p2, using the given
/// inner nodes. Row index runs over x2, column index over p2. Inner weights
/// are applied; outer weights are not.
Eigen::MatrixXd inner_marginal(const Term4& term, const Nodes& x1, const Nodes& p1,
                               const Nodes& x2, const Nodes& p2);

/// Re sum of 2D components on the tensor grid a x b.
Eigen::MatrixXd grid_values(const std::vector<Term2>& terms, const Nodes& a, const Nodes& b);

/// 4D quadrature of Re sum of components, each over its own window.
double integrate_components_4d(const StateComponents& components,
                               const QuadratureSettings& settings, const Params& params);

/// 2 pi int W2^2 dx2 dp2 (internal units) with W2 obtained by quadrature over
/// (x1, p1). Components are grouped by their x2 lobe; cross-lobe products
/// are dropped (relative size exp(-(delta_x/2)^2 / 4)).
double marginal_purity_quadrature(const StateComponents& components,
                                  const QuadratureSettings& settings, const Params& params);

}  // namespace wigrav
