// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <utility>

#include "qrs/density_matrix.hpp"
#include "qrs/rng.hpp"

namespace qrs {

inline constexpr double kProjectorTol = 1e-10;
inline constexpr double kBornTol = 1e-12;

// Outcome bit convention, used everywhere in this library: bit 1 means the
// +1 eigenvalue of the measured Pauli, i.e. the projector (I + sigma)/2.
struct Outcome {
  int bit = 0;
};

namespace detail {

// tr(P rho) without forming the product matrix.
template <int Dim>
double trace_prob(const Eigen::Matrix<cplx, Dim, Dim>& projector,
                  const Eigen::Matrix<cplx, Dim, Dim>& rho) {
  cplx tr(0.0, 0.0);
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j) tr += projector(i, j) * rho(j, i);
  if (std::abs(tr.imag()) > kBornTol)
    throw invalid_observable_error("Born probability has an imaginary part");
  double p = tr.real();
  if (p < 0.0) {
    if (p < -kBornTol) throw invalid_state_error("Born probability below zero");
    p = 0.0;
  }
  if (p > 1.0) {
    if (p > 1.0 + kBornTol) throw invalid_state_error("Born probability above one");
    p = 1.0;
  }
  return p;
}

}  // namespace detail

template <int Dim>
double born_probability(const DensityMatrix<Dim>& rho,
                        const Eigen::Matrix<cplx, Dim, Dim>& projector) {
  if ((projector - projector.adjoint()).cwiseAbs().maxCoeff() > kProjectorTol)
    throw invalid_observable_error("projector is not Hermitian");
  if ((projector * projector - projector).cwiseAbs().maxCoeff() > kProjectorTol)
    throw invalid_observable_error("projector is not idempotent");
  return detail::trace_prob<Dim>(projector, rho.matrix());
}

// Projective single-qubit measurement along an axis, with the collapsed
// post-measurement state (projection, then renormalization).
inline std::pair<Outcome, Density2> sample_outcome(const Density2& rho, Axis axis,
                                                   SplitRng& rng) {
  const Mat2 proj_plus = plus_projector(axis);
  const double p1 = detail::trace_prob<2>(proj_plus, rho.matrix());
  const bool plus = rng.uniform01() < p1;
  const Mat2 proj = plus ? proj_plus : minus_projector(axis);
  Mat2 post = proj * rho.matrix() * proj;
  double norm = post.trace().real();
  post /= norm;
  post = (post + post.adjoint()) / 2.0;
  return {Outcome{plus ? 1 : 0}, Density2::trusted(post)};
}

namespace detail {

struct PairBasis {
  std::array<Mat4, 3> proj;  // (+,+), (+,-), (-,+); (-,-) is the remainder
};

inline const PairBasis& pair_basis(Axis axis) {
  static const std::array<PairBasis, 3> cache = [] {
    std::array<PairBasis, 3> out;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      const Mat2 plus = plus_projector(a);
      const Mat2 minus = minus_projector(a);
      auto& basis = out[static_cast<int>(a)];
      basis.proj[0] = kron(plus, plus);
      basis.proj[1] = kron(plus, minus);
      basis.proj[2] = kron(minus, plus);
    }
    return out;
  }();
  return cache[static_cast<int>(axis)];
}

}  // namespace detail

// Measure sigma(axis) ot sigma(axis) on a register pair by sampling the
// joint eigenbasis; returns the (transmitted-slot, kept-slot) outcome bits.
// The pair is consumed: a stabilizer test only needs the two bits.
inline std::pair<Outcome, Outcome> pauli_pair_measure(const Density4& rho, Axis axis,
                                                      SplitRng& rng) {
  const auto& basis = detail::pair_basis(axis);
  const Mat4& m = rho.matrix();
  const double p11 = detail::trace_prob<4>(basis.proj[0], m);
  const double p10 = detail::trace_prob<4>(basis.proj[1], m);
  const double p01 = detail::trace_prob<4>(basis.proj[2], m);
  double u = rng.uniform01();
  if (u < p11) return {Outcome{1}, Outcome{1}};
  u -= p11;
  if (u < p10) return {Outcome{1}, Outcome{0}};
  u -= p10;
  if (u < p01) return {Outcome{0}, Outcome{1}};
  return {Outcome{0}, Outcome{0}};
}

// Measure one slot of a register pair and collapse the other. Used for the
// target register: the transmitted half is read out along an axis and the
// kept half becomes the sensing probe.
inline std::pair<Outcome, Density2> measure_slot(const Density4& rho, Slot slot, Axis axis,
                                                 SplitRng& rng) {
  const Mat2 plus = plus_projector(axis);
  const Mat4 proj_plus =
      slot == Slot::transmitted ? kron(plus, identity2()) : kron(identity2(), plus);
  const double p1 = detail::trace_prob<4>(proj_plus, rho.matrix());
  const bool got_plus = rng.uniform01() < p1;
  Mat4 proj = proj_plus;
  if (!got_plus) {
    const Mat2 minus = minus_projector(axis);
    proj = slot == Slot::transmitted ? kron(minus, identity2()) : kron(identity2(), minus);
  }
  Mat4 post = proj * rho.matrix() * proj;
  double norm = post.trace().real();
  post /= norm;
  post = (post + post.adjoint()) / 2.0;
  Density2 rest = partial_trace(Density4::trusted(post),
                                slot == Slot::transmitted ? Slot::kept : Slot::transmitted);
  return {Outcome{got_plus ? 1 : 0}, rest};
}

}  // namespace qrs
