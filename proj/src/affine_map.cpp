#include "wigrav/affine_map.hpp"

#include <algorithm>

namespace wigrav {

Mat4 symplectic_form() {
  Mat4 j = Mat4::Zero();
  j.topRightCorner<2, 2>() = Eigen::Matrix2d::Identity();
  j.bottomLeftCorner<2, 2>() = -Eigen::Matrix2d::Identity();
  return j;
}

AffineMap4 AffineMap4::compose(const AffineMap4& inner) const {
  return {matrix_ * inner.matrix_, matrix_ * inner.offset_ + offset_};
}

AffineMap4 AffineMap4::inverse() const {
  // Symplectic maps invert exactly as -J M^T J. In internal units the flow
  // matrices mix entries ~1e-10 and ~1e9, which LU cannot invert to 1e-12.
  // Non-symplectic input falls back to LU.
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  Mat4 inv;
  if (symplectic_defect() <= 1e-12 * scale * scale) {
    const Mat4 j = symplectic_form();
    inv = -j * matrix_.transpose() * j;
  } else {
    inv = matrix_.fullPivLu().inverse();
  }
  return {inv, -(inv * offset_)};
}

double AffineMap4::symplectic_defect() const {
  const Mat4 j = symplectic_form();
  return (matrix_.transpose() * j * matrix_ - j).cwiseAbs().maxCoeff();
}

}  // namespace wigrav
