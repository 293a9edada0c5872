#pragma once

#include <Eigen/Dense>

namespace wigrav {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Canonical symplectic form for the ordering z = (x1, x2, p1, p2).
Mat4 symplectic_form();

/// Affine phase-space map z -> M z + c on internal coordinates
/// (x1, x2 in sigma; p1, p2 in hbar/sigma).
class AffineMap4 {
 public:
  AffineMap4() : matrix_(Mat4::Identity()), offset_(Vec4::Zero()) {}
  AffineMap4(const Mat4& matrix, const Vec4& offset) : matrix_(matrix), offset_(offset) {}

  static AffineMap4 identity() { return {}; }

  Vec4 operator()(const Vec4& z) const { return matrix_ * z + offset_; }

  /// this(inner(z)).
  AffineMap4 compose(const AffineMap4& inner) const;
  AffineMap4 inverse() const;

  const Mat4& matrix() const { return matrix_; }
  const Vec4& offset() const { return offset_; }

  /// max |M^T J M - J|.
  double symplectic_defect() const;
  double determinant() const { return matrix_.determinant(); }

 private:
  Mat4 matrix_;
  Vec4 offset_;
};

}  // namespace wigrav
