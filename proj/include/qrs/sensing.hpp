// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdint>

#include "qrs/density_matrix.hpp"

namespace qrs {

// Field to be sensed and the timing of one interrogation cycle.
// omega is the Larmor-style detuning under H = (omega/2) sz, in units with
// hbar = 1; t is the free-evolution time; t_p/t_r are preparation and
// readout overheads; T is the total time budget (0 = not specified).
struct SensingField {
  double omega = 0.0;
  double t = 1.0;
  double t_p = 0.0;
  double t_r = 0.0;
  double T = 0.0;

  void validate() const {
    if (!(t > 0.0)) throw parameter_error("sensing field needs t > 0");
    if (t_p < 0.0 || t_r < 0.0) throw parameter_error("negative overhead time");
    if (T < 0.0) throw parameter_error("negative time budget");
  }

  // floor(T / (t_p + t + t_r)); requires a positive budget yielding >= 1.
  std::uint64_t repetition_count() const {
    validate();
    if (!(T > 0.0)) throw parameter_error("repetition count needs a time budget T > 0");
    double m = std::floor(T / (t_p + t + t_r));
    if (m < 1.0) throw parameter_error("time budget admits no full cycle");
    return static_cast<std::uint64_t>(m);
  }
};

// Exact conjugation by exp(-i omega t sz / 2). Elementwise on the matrix:
// diagonal untouched (so r_z and the spectrum are preserved), off-diagonal
// rotated by exp(-/+ i omega t); equivalently the Bloch vector rotates about
// z by angle omega*t. No small-angle approximation here; linearized forms
// live only in the closed-form uncertainty bounds.
inline Density2 evolve_phase(const Density2& rho, const SensingField& field) {
  field.validate();
  const double angle = field.omega * field.t;
  const cplx phase(std::cos(angle), -std::sin(angle));
  Mat2 m = rho.matrix();
  m(0, 1) *= phase;
  m(1, 0) = std::conj(m(0, 1));
  return Density2::trusted(m);
}

}  // namespace qrs
