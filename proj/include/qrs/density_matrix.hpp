// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "qrs/errors.hpp"
#include "qrs/pauli.hpp"

namespace qrs {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
// Eigenvalues in [-kPsdClampTol, 0) are rounding debris: clamped to zero and
// the spectrum renormalized. Anything more negative is a real bug.
inline constexpr double kPsdClampTol = 1e-10;

// Density matrix on one qubit (Dim = 2) or a register pair (Dim = 4).
// Checked construction goes through from_matrix(); operations inside the
// library that preserve the invariants by algebra use trusted() and the test
// suite re-validates their outputs instead.
template <int Dim>
class DensityMatrix {
  static_assert(Dim == 2 || Dim == 4, "only single qubits and register pairs");

 public:
  using Matrix = Eigen::Matrix<cplx, Dim, Dim>;
  using Vector = Eigen::Matrix<cplx, Dim, 1>;

  static DensityMatrix from_matrix(const Matrix& m) {
    check_hermitian_unit_trace(m);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig >= 0.0) return DensityMatrix(m);
    if (min_eig < -kPsdClampTol)
      throw invalid_state_error("density matrix has eigenvalue " + std::to_string(min_eig) +
                                " below the clamp tolerance");
    // Clamp rounding-level negative eigenvalues and renormalize the trace.
    Eigen::Matrix<double, Dim, 1> vals = solver.eigenvalues().cwiseMax(0.0);
    vals /= vals.sum();
    Matrix fixed = solver.eigenvectors() * vals.template cast<cplx>().asDiagonal() *
                   solver.eigenvectors().adjoint();
    fixed = (fixed + fixed.adjoint()) / 2.0;
    return DensityMatrix(fixed);
  }

  // |psi><psi| from a (not necessarily normalized) state vector.
  static DensityMatrix pure(const Vector& psi) {
    double n2 = psi.squaredNorm();
    if (n2 <= 0.0) throw invalid_state_error("pure state vector is zero");
    Matrix m = psi * psi.adjoint() / n2;
    return DensityMatrix(m);
  }

  // Unchecked wrap for matrices that are valid by construction.
  static DensityMatrix trusted(const Matrix& m) { return DensityMatrix(m); }

  const Matrix& matrix() const { return m_; }

  // Throws unless all three invariants hold (positivity up to clamp tol).
  void validate() const {
    check_hermitian_unit_trace(m_);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
    double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -kPsdClampTol)
      throw invalid_state_error("density matrix has eigenvalue " + std::to_string(min_eig) +
                                " below the clamp tolerance");
  }

 private:
  explicit DensityMatrix(const Matrix& m) : m_(m) {}

  static void check_hermitian_unit_trace(const Matrix& m) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
      throw invalid_state_error("matrix is not Hermitian");
    cplx tr = m.trace();
    if (std::abs(tr - cplx(1.0, 0.0)) > kTraceTol)
      throw invalid_state_error("matrix trace is not 1");
  }

  Matrix m_;
};

using Density2 = DensityMatrix<2>;
using Density4 = DensityMatrix<4>;

enum class Slot { transmitted, kept };  // transmitted = client-bound half

// Reduce a register pair to one qubit by tracing the other out.
inline Density2 partial_trace(const Density4& rho, Slot keep) {
  const Mat4& m = rho.matrix();
  Mat2 out = Mat2::Zero();
  if (keep == Slot::transmitted) {
    // Keep the high-order index c of |c s>.
    for (int c = 0; c < 2; ++c)
      for (int cp = 0; cp < 2; ++cp)
        for (int s = 0; s < 2; ++s) out(c, cp) += m(2 * c + s, 2 * cp + s);
  } else {
    for (int s = 0; s < 2; ++s)
      for (int sp = 0; sp < 2; ++sp)
        for (int c = 0; c < 2; ++c) out(s, sp) += m(2 * c + s, 2 * c + sp);
  }
  return Density2::trusted(out);
}

// Overlap <psi|rho|psi> with the pure reference |psi><psi|.
// The reference must be rank one; mixedness there is a caller bug.
template <int Dim>
double fidelity_pure(const DensityMatrix<Dim>& rho, const DensityMatrix<Dim>& reference) {
  const auto& p = reference.matrix();
  double purity = (p * p).trace().real();
  if (std::abs(purity - 1.0) > 1e-9)
    throw invalid_observable_error("fidelity reference state is not pure");
  double f = (p * rho.matrix()).trace().real();
  if (f < 0.0 && f > -1e-12) f = 0.0;
  if (f > 1.0 && f < 1.0 + 1e-12) f = 1.0;
  return f;
}

// Fidelity of a qubit state against I/2: 1/2 + sqrt(det rho), the qubit
// closed form of the Uhlmann fidelity (squared-overlap convention).
inline double fidelity_maximally_mixed(const Density2& rho) {
  const Mat2& m = rho.matrix();
  double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  if (det < 0.0) det = 0.0;  // pure states land at tiny negative det by rounding
  return 0.5 + std::sqrt(det);
}

}  // namespace qrs
