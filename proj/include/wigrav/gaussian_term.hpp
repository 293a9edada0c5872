#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "wigrav/affine_map.hpp"

namespace wigrav {

/// One complex Gaussian component
///
///   exp(log_weight - (z - center)^T precision (z - center) + i wavevector^T (z - center))
///
/// A real phase-space function is represented as the real part of a sum of
/// such components. `precision` is symmetric positive definite; centers and
/// wavevectors are real. Keeping the Gaussian in centered form avoids the
/// exp(+-600) cancellations the expanded form would produce for lobes tens
/// of widths away from the origin.
template <int N>
struct GaussianTerm {
  using Vec = Eigen::Matrix<double, N, 1>;
  using Mat = Eigen::Matrix<double, N, N>;

  std::complex<double> log_weight{0.0, 0.0};
  Vec center = Vec::Zero();
  Mat precision = Mat::Identity();
  Vec wavevector = Vec::Zero();

  std::complex<double> operator()(const Vec& z) const {
    const Vec delta = z - center;
    const double quad = delta.dot(precision * delta);
    return std::exp(log_weight + std::complex<double>(-quad, wavevector.dot(delta)));
  }

  /// Integral over all of R^N.
  std::complex<double> integral() const {
    const Eigen::LLT<Mat> llt(precision);
    const double det = llt.matrixL().determinant();
    const double log_norm = 0.5 * N * std::log(std::numbers::pi) - std::log(det);
    const double damping = 0.25 * wavevector.dot(llt.solve(wavevector));
    return std::exp(log_weight + std::complex<double>(log_norm - damping, 0.0));
  }

  /// Covariance of the Gaussian envelope, (2 precision)^-1.
  Mat covariance() const { return (2.0 * precision).inverse(); }
};

using Term2 = GaussianTerm<2>;
using Term4 = GaussianTerm<4>;

template <int N>
GaussianTerm<N> conj(const GaussianTerm<N>& t) {
  GaussianTerm<N> r = t;
  r.log_weight = std::conj(t.log_weight);
  r.wavevector = -t.wavevector;
  return r;
}

/// Pointwise product of two components.
template <int N>
GaussianTerm<N> multiply(const GaussianTerm<N>& a, const GaussianTerm<N>& b) {
  using Vec = typename GaussianTerm<N>::Vec;
  using Mat = typename GaussianTerm<N>::Mat;
  GaussianTerm<N> r;
  r.precision = a.precision + b.precision;
  const Eigen::LLT<Mat> llt(r.precision);
  r.center = llt.solve(a.precision * a.center + b.precision * b.center);
  const Vec gap = a.center - b.center;
  // (mu_a - mu_b)^T Q_a (Q_a + Q_b)^-1 Q_b (mu_a - mu_b)
  const double offset = (a.precision * gap).dot(llt.solve(b.precision * gap));
  const double phase =
      a.wavevector.dot(r.center - a.center) + b.wavevector.dot(r.center - b.center);
  r.wavevector = a.wavevector + b.wavevector;
  r.log_weight = a.log_weight + b.log_weight + std::complex<double>(-offset, phase);
  return r;
}

/// Integrates out every coordinate not listed in `keep`.
template <int K, int N>
GaussianTerm<K> marginalize(const GaussianTerm<N>& t, const std::array<int, K>& keep) {
  constexpr int M = N - K;
  static_assert(M > 0, "nothing to integrate");
  std::array<int, M> drop{};
  {
    int n = 0;
    for (int i = 0; i < N; ++i) {
      bool kept = false;
      for (int k : keep) kept = kept || (k == i);
      if (!kept) drop[n++] = i;
    }
  }
  Eigen::Matrix<double, K, K> quu;
  Eigen::Matrix<double, K, M> quy;
  Eigen::Matrix<double, M, M> qyy;
  Eigen::Matrix<double, K, 1> ku;
  Eigen::Matrix<double, M, 1> ky;
  for (int a = 0; a < K; ++a) {
    ku(a) = t.wavevector(keep[a]);
    for (int b = 0; b < K; ++b) quu(a, b) = t.precision(keep[a], keep[b]);
    for (int b = 0; b < M; ++b) quy(a, b) = t.precision(keep[a], drop[b]);
  }
  for (int a = 0; a < M; ++a) {
    ky(a) = t.wavevector(drop[a]);
    for (int b = 0; b < M; ++b) qyy(a, b) = t.precision(drop[a], drop[b]);
  }
  const Eigen::LLT<Eigen::Matrix<double, M, M>> llt(qyy);
  const double det = llt.matrixL().determinant();

  GaussianTerm<K> r;
  for (int a = 0; a < K; ++a) r.center(a) = t.center(keep[a]);
  r.precision = quu - quy * llt.solve(quy.transpose());
  r.precision = 0.5 * (r.precision + r.precision.transpose()).eval();
  r.wavevector = ku - quy * llt.solve(ky);
  const double log_norm = 0.5 * M * std::log(std::numbers::pi) - std::log(det);
  const double damping = 0.25 * ky.dot(llt.solve(ky));
  r.log_weight = t.log_weight + std::complex<double>(log_norm - damping, 0.0);
  return r;
}

/// Returns the component z -> t(backward(z)), i.e. t transported by the
/// flow whose inverse is `backward`.
inline Term4 pull_back(const Term4& t, const AffineMap4& backward) {
  const Mat4& b = backward.matrix();
  Term4 r;
  r.log_weight = t.log_weight;
  r.center = b.fullPivLu().solve(t.center - backward.offset());
  r.precision = b.transpose() * t.precision * b;
  r.precision = 0.5 * (r.precision + r.precision.transpose()).eval();
  r.wavevector = b.transpose() * t.wavevector;
  return r;
}

/// Integral of (Re sum_a T_a) * (Re sum_b T_b).
template <int N, class Range>
double integrate_real_square(const Range& terms) {
  double total = 0.0;
  for (const auto& a : terms) {
    for (const auto& b : terms) {
      // Re(x) Re(y) = (Re(x y) + Re(x conj y)) / 2
      total += 0.5 * (multiply<N>(a, b).integral().real() +
                      multiply<N>(a, conj<N>(b)).integral().real());
    }
  }
  return total;
}

}  // namespace wigrav
