#include "wigrav/phase_space_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace wigrav {

namespace {

using cd = std::complex<double>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kEnvelopeWidths = 8.0;

std::vector<double> offsets(const Nodes& n, double center) {
  std::vector<double> d(n.x.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = n.x[i] - center;
  return d;
}

// exp(-2 q u_i v_j)
MatrixXd pair_table(double q, const std::vector<double>& u, const std::vector<double>& v) {
  MatrixXd m(u.size(), v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    for (std::size_t i = 0; i < u.size(); ++i) m(i, j) = std::exp(-2.0 * q * u[i] * v[j]);
  }
  return m;
}

struct Window2 {
  double lo_x, hi_x, lo_p, hi_p;
};

Nodes build_nodes(double lo, double hi, bool momentum, const QuadratureSettings& s,
                  const Params& params) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const Axis axis = momentum ? momentum_axis(center, half, s, params)
                             : position_axis(center, half, s, params);
  return axis_nodes(axis, s.rule);
}

}  // namespace

TermWindow term_window(const Term4& term, const QuadratureSettings& settings) {
  const Mat4 cov = term.covariance();
  TermWindow w;
  w.center = term.center;
  for (int i = 0; i < 4; ++i) {
    const double configured = i < 2 ? settings.pos_half_width : settings.mom_half_width;
    w.half_width(i) = std::max(configured, kEnvelopeWidths * std::sqrt(cov(i, i)));
  }
  return w;
}

Eigen::MatrixXd inner_marginal(const Term4& term, const Nodes& x1, const Nodes& p1,
                               const Nodes& x2, const Nodes& p2) {
  const Mat4& q = term.precision;
  const Vec4& k = term.wavevector;
  const std::vector<double> da = offsets(x1, term.center(0));
  const std::vector<double> db = offsets(x2, term.center(1));
  const std::vector<double> dc = offsets(p1, term.center(2));
  const std::vector<double> dd = offsets(p2, term.center(3));
  const Eigen::Index na = da.size(), nb = db.size(), nc = dc.size(), nd = dd.size();

  Eigen::VectorXcd a(na), c(nc);
  for (Eigen::Index i = 0; i < na; ++i) {
    a(i) = x1.w[i] * std::exp(cd(-q(0, 0) * da[i] * da[i], k(0) * da[i]));
  }
  for (Eigen::Index i = 0; i < nc; ++i) {
    c(i) = p1.w[i] * std::exp(cd(-q(2, 2) * dc[i] * dc[i], k(2) * dc[i]));
  }
  const MatrixXd v01 = pair_table(q(0, 1), da, db);
  const MatrixXd v02 = pair_table(q(0, 2), da, dc);
  const MatrixXd v03 = pair_table(q(0, 3), da, dd);
  const MatrixXd v12 = pair_table(q(1, 2), db, dc);
  const MatrixXd v13 = pair_table(q(1, 3), db, dd);
  const MatrixXd v23 = pair_table(q(2, 3), dc, dd);

  MatrixXd out(nb, nd);
  MatrixXd x_re(na, nc), x_im(na, nc);
  MatrixXd m_re(na, nd), m_im(na, nd);
  for (Eigen::Index b = 0; b < nb; ++b) {
    // X(a, c) = A(a) V01(a, b) V02(a, c) C(c) V12(b, c)
    for (Eigen::Index j = 0; j < nc; ++j) {
      const cd cj = c(j) * v12(b, j);
      for (Eigen::Index i = 0; i < na; ++i) {
        const cd v = a(i) * (v01(i, b) * v02(i, j)) * cj;
        x_re(i, j) = v.real();
        x_im(i, j) = v.imag();
      }
    }
    m_re.noalias() = x_re * v23;
    m_im.noalias() = x_im * v23;
    const cd outer_b = std::exp(term.log_weight + cd(-q(1, 1) * db[b] * db[b], k(1) * db[b]));
    for (Eigen::Index j = 0; j < nd; ++j) {
      double s_re = 0.0, s_im = 0.0;
      for (Eigen::Index i = 0; i < na; ++i) {
        const double f = v03(i, j);
        s_re += f * m_re(i, j);
        s_im += f * m_im(i, j);
      }
      const cd outer = outer_b * std::exp(cd(-q(3, 3) * dd[j] * dd[j], k(3) * dd[j])) * v13(b, j);
      out(b, j) = (outer * cd(s_re, s_im)).real();
    }
  }
  return out;
}

Eigen::MatrixXd grid_values(const std::vector<Term2>& terms, const Nodes& a, const Nodes& b) {
  const Eigen::Index na = a.x.size(), nb = b.x.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(na, nb);
  Eigen::VectorXcd fa(na), fb(nb);
  for (const Term2& t : terms) {
    const std::vector<double> da = offsets(a, t.center(0));
    const std::vector<double> db = offsets(b, t.center(1));
    const auto& q = t.precision;
    for (Eigen::Index i = 0; i < na; ++i) {
      fa(i) = std::exp(t.log_weight + cd(-q(0, 0) * da[i] * da[i], t.wavevector(0) * da[i]));
    }
    for (Eigen::Index j = 0; j < nb; ++j) {
      fb(j) = std::exp(cd(-q(1, 1) * db[j] * db[j], t.wavevector(1) * db[j]));
    }
    if (q(0, 1) == 0.0) {
      for (Eigen::Index j = 0; j < nb; ++j) {
        for (Eigen::Index i = 0; i < na; ++i) out(i, j) += (fa(i) * fb(j)).real();
      }
      continue;
    }
    const MatrixXd v = pair_table(q(0, 1), da, db);
    for (Eigen::Index j = 0; j < nb; ++j) {
      for (Eigen::Index i = 0; i < na; ++i) out(i, j) += (fa(i) * fb(j)).real() * v(i, j);
    }
  }
  return out;
}

double integrate_components_4d(const StateComponents& components,
                               const QuadratureSettings& settings, const Params& params) {
  double total = 0.0;
  for (const auto& comp : components) {
    const TermWindow w = term_window(comp.term, settings);
    std::array<Nodes, 4> n;
    for (int i = 0; i < 4; ++i) {
      n[i] = build_nodes(w.center(i) - w.half_width(i), w.center(i) + w.half_width(i), i >= 2,
                         settings, params);
    }
    const MatrixXd inner = inner_marginal(comp.term, n[0], n[2], n[1], n[3]);
    const VectorXd wb = Eigen::Map<const VectorXd>(n[1].w.data(), n[1].w.size());
    const VectorXd wd = Eigen::Map<const VectorXd>(n[3].w.data(), n[3].w.size());
    total += wb.dot(inner * wd);
  }
  return total;
}

double marginal_purity_quadrature(const StateComponents& components,
                                  const QuadratureSettings& settings, const Params& params) {
  // Group by x2 lobe.
  std::vector<std::size_t> order(components.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return components[l].term.center(1) < components[r].term.center(1);
  });
  std::vector<std::vector<std::size_t>> groups;
  double last = 0.0;
  for (std::size_t idx : order) {
    const double x = components[idx].term.center(1);
    if (groups.empty() || x - last > settings.pos_half_width) groups.emplace_back();
    groups.back().push_back(idx);
    last = x;
  }

  double total = 0.0;
  for (const auto& group : groups) {
    Window2 box{1e300, -1e300, 1e300, -1e300};
    std::vector<TermWindow> windows;
    for (std::size_t idx : group) {
      const TermWindow w = term_window(components[idx].term, settings);
      box.lo_x = std::min(box.lo_x, w.center(1) - w.half_width(1));
      box.hi_x = std::max(box.hi_x, w.center(1) + w.half_width(1));
      box.lo_p = std::min(box.lo_p, w.center(3) - w.half_width(3));
      box.hi_p = std::max(box.hi_p, w.center(3) + w.half_width(3));
      windows.push_back(w);
    }
    const Nodes x2 = build_nodes(box.lo_x, box.hi_x, false, settings, params);
    const Nodes p2 = build_nodes(box.lo_p, box.hi_p, true, settings, params);
    MatrixXd w2 = MatrixXd::Zero(x2.x.size(), p2.x.size());
    for (std::size_t g = 0; g < group.size(); ++g) {
      const TermWindow& w = windows[g];
      const Nodes x1 = build_nodes(w.center(0) - w.half_width(0), w.center(0) + w.half_width(0),
                                   false, settings, params);
      const Nodes p1 = build_nodes(w.center(2) - w.half_width(2), w.center(2) + w.half_width(2),
                                   true, settings, params);
      w2 += inner_marginal(components[group[g]].term, x1, p1, x2, p2);
    }
    const VectorXd wb = Eigen::Map<const VectorXd>(x2.w.data(), x2.w.size());
    const VectorXd wd = Eigen::Map<const VectorXd>(p2.w.data(), p2.w.size());
    total += wb.dot(w2.cwiseAbs2() * wd);
  }
  return 2.0 * std::numbers::pi * total;
}

}  // namespace wigrav
