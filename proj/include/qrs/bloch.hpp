// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>

#include "qrs/density_matrix.hpp"

namespace qrs {

inline constexpr double kBlochTol = 1e-10;

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// rho = (I + r . sigma) / 2; rejects vectors outside the unit ball
// beyond tolerance.
inline Density2 density_from_bloch(const BlochVector& r) {
  if (r.norm() > 1.0 + kBlochTol)
    throw invalid_state_error("Bloch vector leaves the unit ball");
  Mat2 m;
  m(0, 0) = cplx((1.0 + r.z) / 2.0, 0.0);
  m(1, 1) = cplx((1.0 - r.z) / 2.0, 0.0);
  m(0, 1) = cplx(r.x / 2.0, -r.y / 2.0);
  m(1, 0) = cplx(r.x / 2.0, r.y / 2.0);
  return Density2::from_matrix(m);
}

inline BlochVector bloch_from_density(const Density2& rho) {
  const Mat2& m = rho.matrix();
  BlochVector r;
  r.x = 2.0 * m(0, 1).real();
  r.y = -2.0 * m(0, 1).imag();
  r.z = (m(0, 0) - m(1, 1)).real();
  return r;
}

}  // namespace qrs
