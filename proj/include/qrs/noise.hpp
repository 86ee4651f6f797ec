// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "qrs/density_matrix.hpp"
#include "qrs/rng.hpp"

namespace qrs {

// Pauli applied to the transmitted half of one register pair. Y stands in
// for the X-then-Z burst as well: sx*sz and sy conjugate a state identically
// (the i factor cancels), and only conjugation ever acts here.
enum class PauliLabel { I, X, Y, Z };

// Per-register channel on the transmitted qubit: rho -> (P ot I) rho (P ot I).
// Register indices count from 0 within a round and reset between rounds.
struct NoiseSchedule {
  enum class Kind { identity, iid_pauli, periodic_pauli, scripted };

  Kind kind = Kind::identity;

  // iid_pauli: independent per-register draw with these probabilities.
  double p_x = 0.0;
  double p_y = 0.0;
  double p_z = 0.0;

  // periodic_pauli: op at register indices offset, offset+period, ...
  std::uint64_t period = 1;
  PauliLabel op = PauliLabel::I;
  std::uint64_t offset = 0;

  // scripted: explicit per-register labels.
  std::vector<PauliLabel> script;

  static NoiseSchedule identity() { return NoiseSchedule{}; }

  static NoiseSchedule iid_pauli(double p_x, double p_y, double p_z) {
    if (p_x < 0.0 || p_y < 0.0 || p_z < 0.0 || p_x + p_y + p_z > 1.0)
      throw parameter_error("iid Pauli probabilities must be nonnegative with sum <= 1");
    NoiseSchedule s;
    s.kind = Kind::iid_pauli;
    s.p_x = p_x;
    s.p_y = p_y;
    s.p_z = p_z;
    return s;
  }

  // Default phase puts the first error at index period-1 (the error clock
  // completes one full period before firing).
  static NoiseSchedule periodic_pauli(std::uint64_t period, PauliLabel op) {
    return periodic_pauli(period, op, period - 1);
  }

  static NoiseSchedule periodic_pauli(std::uint64_t period, PauliLabel op,
                                      std::uint64_t offset) {
    if (period < 1) throw parameter_error("periodic schedule needs period >= 1");
    if (offset >= period) throw parameter_error("periodic offset must be < period");
    if (op == PauliLabel::I) throw parameter_error("periodic schedule needs a real error op");
    NoiseSchedule s;
    s.kind = Kind::periodic_pauli;
    s.period = period;
    s.op = op;
    s.offset = offset;
    return s;
  }

  static NoiseSchedule scripted(std::vector<PauliLabel> labels) {
    NoiseSchedule s;
    s.kind = Kind::scripted;
    s.script = std::move(labels);
    return s;
  }

  // The label this schedule assigns to one register. Consumes one rng draw
  // per call in the iid case, none otherwise.
  PauliLabel label_for(std::uint64_t register_index, SplitRng& rng) const {
    switch (kind) {
      case Kind::identity:
        return PauliLabel::I;
      case Kind::iid_pauli: {
        const double u = rng.uniform01();
        if (u < p_x) return PauliLabel::X;
        if (u < p_x + p_y) return PauliLabel::Y;
        if (u < p_x + p_y + p_z) return PauliLabel::Z;
        return PauliLabel::I;
      }
      case Kind::periodic_pauli:
        return (register_index % period == offset) ? op : PauliLabel::I;
      case Kind::scripted:
        if (register_index >= script.size())
          throw config_error("scripted noise schedule exhausted");
        return script[register_index];
    }
    return PauliLabel::I;
  }
};

// Conjugate the transmitted slot by a Pauli, in place on a copy. Index map
// (|c s>, index 2c+s): X swaps c; Z flips the sign of elements with exactly
// one c-bit set; Y composes the two.
inline Density4 apply_pauli_first(const Density4& rho, PauliLabel label) {
  if (label == PauliLabel::I) return rho;
  Mat4 m = rho.matrix();
  if (label == PauliLabel::X || label == PauliLabel::Y) {
    m.row(0).swap(m.row(2));
    m.row(1).swap(m.row(3));
    m.col(0).swap(m.col(2));
    m.col(1).swap(m.col(3));
  }
  if (label == PauliLabel::Z || label == PauliLabel::Y) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (((i >> 1) ^ (j >> 1)) & 1) m(i, j) = -m(i, j);
  }
  return Density4::trusted(m);
}

// Apply the schedule to one register. Identity schedules return the input
// bit-for-bit untouched.
inline Density4 apply_noise(const Density4& rho, std::uint64_t register_index,
                            const NoiseSchedule& sched, SplitRng& rng) {
  return apply_pauli_first(rho, sched.label_for(register_index, rng));
}

// Probability that a tested register fails its stabilizer test, under the
// uniform X/Z test split: an X error trips only the Z test, a Z error only
// the X test (each weight 1/2 given that the register is tested at all),
// and a Y = XZ error trips both (weight 1).
inline double expected_fail_rate(const NoiseSchedule& sched) {
  auto weight = [](PauliLabel l) {
    switch (l) {
      case PauliLabel::I: return 0.0;
      case PauliLabel::Y: return 1.0;
      default: return 0.5;
    }
  };
  switch (sched.kind) {
    case NoiseSchedule::Kind::identity:
      return 0.0;
    case NoiseSchedule::Kind::iid_pauli:
      return sched.p_x * 0.5 + sched.p_y * 1.0 + sched.p_z * 0.5;
    case NoiseSchedule::Kind::periodic_pauli:
      return weight(sched.op) / static_cast<double>(sched.period);
    case NoiseSchedule::Kind::scripted: {
      if (sched.script.empty()) return 0.0;
      double sum = 0.0;
      for (PauliLabel l : sched.script) sum += weight(l);
      return sum / static_cast<double>(sched.script.size());
    }
  }
  return 0.0;
}

}  // namespace qrs
