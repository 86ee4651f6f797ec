// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qrs {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix<cplx, 2, 2>;
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Vec2 = Eigen::Matrix<cplx, 2, 1>;
using Vec4 = Eigen::Matrix<cplx, 4, 1>;

enum class Axis { X, Y, Z };

inline const Mat2& identity2() {
  static const Mat2 m = Mat2::Identity();
  return m;
}

inline const Mat2& sigma_x() {
  static const Mat2 m = (Mat2() << cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 0)).finished();
  return m;
}

inline const Mat2& sigma_y() {
  static const Mat2 m = (Mat2() << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0)).finished();
  return m;
}

inline const Mat2& sigma_z() {
  static const Mat2 m = (Mat2() << cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(-1, 0)).finished();
  return m;
}

inline const Mat2& sigma(Axis a) {
  switch (a) {
    case Axis::X: return sigma_x();
    case Axis::Y: return sigma_y();
    default: return sigma_z();
  }
}

// Projector onto the +1 eigenspace of sigma(a).
inline Mat2 plus_projector(Axis a) { return (identity2() + sigma(a)) / 2.0; }

// Projector onto the -1 eigenspace of sigma(a).
inline Mat2 minus_projector(Axis a) { return (identity2() - sigma(a)) / 2.0; }

// Kronecker product with the first factor on the high-order index:
// basis order |c s> with index 2*c + s (c = transmitted/client slot).
inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

inline Vec4 kron(const Vec2& a, const Vec2& b) {
  Vec4 out;
  out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return out;
}

}  // namespace qrs
