// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdint>

#include "qrs/errors.hpp"

namespace qrs::bounds {

// Uncertainty bounds below this line are linearizations around omega*t ~ 0.
// The simulator never linearizes; these formulas do, which is why the curve
// and verification layers warn when |omega*t| > 0.1.

// A bound that may be "no finite bound at all" (e.g. the adversary's
// uncertainty when the readout carries no signal). Deliberately not a float
// infinity: output files must show a distinguished sentinel, never inf.
class BoundValue {
 public:
  static BoundValue finite(double v) { return BoundValue(v, false); }
  static BoundValue unbounded() { return BoundValue(0.0, true); }

  bool is_unbounded() const { return unbounded_; }
  double value() const {
    if (unbounded_) throw domain_error("bound is unbounded");
    return value_;
  }

 private:
  BoundValue(double v, bool u) : value_(v), unbounded_(u) {}
  double value_;
  bool unbounded_;
};

namespace detail {
inline void check_m(std::uint64_t M) {
  if (M < 1) throw parameter_error("repetition count M must be >= 1");
}
inline void check_t(double t) {
  if (!(t > 0.0)) throw parameter_error("interrogation time t must be positive");
}
// Bounds are only meaningful for infidelity below one half.
inline void check_eps(double eps) {
  if (eps < 0.0 || !(eps < 0.5))
    throw domain_error("epsilon must be in [0, 1/2) for the uncertainty bounds");
}
inline void check_s_tilde(double s_tilde) {
  // exp(-2 s~^2) <= 1/2 keeps the two-sided tail below certainty.
  if (!(s_tilde >= std::sqrt(std::log(2.0) / 2.0)))
    throw parameter_error("s_tilde too small: exp(-2 s_tilde^2) must be <= 1/2");
}
}  // namespace detail

// Shot-noise uncertainty of the ideal repeated phase measurement:
// delta omega = 1/(t sqrt(M)).
inline double standard_uncertainty(std::uint64_t M, double t) {
  detail::check_m(M);
  detail::check_t(t);
  return std::sqrt(1.0 / static_cast<double>(M)) / t;
}

// Client-side uncertainty ceiling when the probe is only guaranteed within
// infidelity eps of the ideal: (1/t) sqrt(1/M + 4(eps - eps^2)).
// Reduces bit-for-bit to standard_uncertainty at eps = 0.
inline double client_upper(double eps, std::uint64_t M, double t) {
  detail::check_m(M);
  detail::check_t(t);
  detail::check_eps(eps);
  return std::sqrt(1.0 / static_cast<double>(M) + 4.0 * (eps - eps * eps)) / t;
}

// M -> infinity limit of client_upper: the bias term that repetition cannot
// average away.
inline double client_upper_floor(double eps, double t) {
  detail::check_t(t);
  detail::check_eps(eps);
  return 2.0 * std::sqrt(eps - eps * eps) / t;
}

// Adversary-side uncertainty floor. The most informative state the other
// party can hold at infidelity-from-I/2 ceiling eps has Bloch radius
// R = 2 sqrt(eps - eps^2); estimating through it cannot beat
//   (1/(2t)) sqrt((1 - 4(eps - eps^2)) / (M (eps - eps^2))).
// At eps = 0 the readout is an omega-independent coin: unbounded.
inline BoundValue server_lower(double eps, std::uint64_t M, double t) {
  detail::check_m(M);
  detail::check_t(t);
  detail::check_eps(eps);
  const double q = eps - eps * eps;
  if (q == 0.0) return BoundValue::unbounded();
  return BoundValue::finite(std::sqrt((1.0 - 4.0 * q) / (static_cast<double>(M) * q)) /
                            (2.0 * t));
}

// server_lower / client_upper: how much worse off the adversary provably is.
inline BoundValue asymmetry_ratio(double eps, std::uint64_t M, double t) {
  const BoundValue s = server_lower(eps, M, t);
  if (s.is_unbounded()) return BoundValue::unbounded();
  return BoundValue::finite(s.value() / client_upper(eps, M, t));
}

// Infidelity budget achievable with N = 8k transmitted qubits at confidence
// 1 - delta and tolerated failure fraction Delta:
//   eps = 3*Delta + sqrt(75 ln(2/delta) / (8k)).
// May exceed 1/2 for small k; callers must treat that as out of the bound
// formulas' domain (epsilon_in_bound_domain).
inline double epsilon_from_resources(std::uint64_t k, double Delta, double delta) {
  if (k < 1) throw parameter_error("k must be >= 1");
  if (!(delta > 0.0) || delta >= 1.0) throw parameter_error("delta must be in (0, 1)");
  if (Delta < 0.0) throw parameter_error("Delta must be nonnegative");
  return 3.0 * Delta + std::sqrt(75.0 * std::log(2.0 / delta) / (8.0 * static_cast<double>(k)));
}

inline bool epsilon_in_bound_domain(double eps) { return eps >= 0.0 && eps < 0.5; }

// Probability that all M certificates hold: (1 - delta)^M, computed through
// log1p so tiny delta keeps full relative precision.
inline double confidence_level(double delta, std::uint64_t M) {
  detail::check_m(M);
  if (!(delta > 0.0) || delta >= 1.0) throw parameter_error("delta must be in (0, 1)");
  return std::exp(static_cast<double>(M) * std::log1p(-delta));
}

// As above, joint with the two-sided readout tail at deviation scale s_tilde.
inline double confidence_level(double delta, std::uint64_t M, double s_tilde) {
  detail::check_s_tilde(s_tilde);
  return confidence_level(delta, M) * (1.0 - 2.0 * std::exp(-2.0 * s_tilde * s_tilde));
}

// Finite-confidence (tail-bound) analogues: error radius 2 s~/(t sqrt(M))
// holding except with probability 2 exp(-2 s~^2).
inline double hoeffding_standard(std::uint64_t M, double t, double s_tilde) {
  detail::check_m(M);
  detail::check_t(t);
  detail::check_s_tilde(s_tilde);
  return (2.0 / t) * (s_tilde / std::sqrt(static_cast<double>(M)));
}

// Client ceiling with both the infidelity bias and the finite-confidence
// radius: [2/(t(1-2 eps))] (3 eps + s~/sqrt(M) + sqrt(eps - eps^2)).
// Reduces bit-for-bit to hoeffding_standard at eps = 0.
inline double hoeffding_client_upper(double eps, std::uint64_t M, double t, double s_tilde) {
  detail::check_m(M);
  detail::check_t(t);
  detail::check_eps(eps);
  detail::check_s_tilde(s_tilde);
  return (2.0 / (t * (1.0 - 2.0 * eps))) *
         (3.0 * eps + s_tilde / std::sqrt(static_cast<double>(M)) +
          std::sqrt(eps - eps * eps));
}

// Adversary floor in the same finite-confidence setting:
// s~ / (t sqrt(M) sqrt(eps - eps^2)); unbounded at eps = 0.
inline BoundValue hoeffding_server_lower(double eps, std::uint64_t M, double t,
                                         double s_tilde) {
  detail::check_m(M);
  detail::check_t(t);
  detail::check_eps(eps);
  detail::check_s_tilde(s_tilde);
  const double q = eps - eps * eps;
  if (q == 0.0) return BoundValue::unbounded();
  return BoundValue::finite(s_tilde / (t * std::sqrt(static_cast<double>(M)) * std::sqrt(q)));
}

inline BoundValue hoeffding_asymmetry_ratio(double eps, std::uint64_t M, double t,
                                            double s_tilde) {
  const BoundValue s = hoeffding_server_lower(eps, M, t, s_tilde);
  if (s.is_unbounded()) return BoundValue::unbounded();
  return BoundValue::finite(s.value() / hoeffding_client_upper(eps, M, t, s_tilde));
}

// Uncertainty of estimating omega through an assumed readout model
// P = x + y*omega when the true model is P' = x' + y'*omega, evaluated at
// the omega ~ 0 working point (so the sampling variance is x'(1 - x')):
//   (1/|y|) sqrt( x'(1-x')/M + (x - x')^2 ).
// y' drops out at the working point; it is kept in the signature because the
// two models are a pair.
inline double mismatched_probability_uncertainty(double x, double y, double x_prime,
                                                 double y_prime, std::uint64_t M) {
  (void)y_prime;
  detail::check_m(M);
  if (y == 0.0) throw parameter_error("assumed model has no omega sensitivity (y = 0)");
  if (x_prime < 0.0 || x_prime > 1.0)
    throw parameter_error("true working-point probability x' must be in [0, 1]");
  const double bias = x - x_prime;
  return std::sqrt(x_prime * (1.0 - x_prime) / static_cast<double>(M) + bias * bias) /
         std::abs(y);
}

}  // namespace qrs::bounds
