// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace qrs {

// Base type for everything this library throws on purpose.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A matrix failed the density-matrix invariants (Hermiticity, unit trace,
// positivity beyond the clamp tolerance) or a Bloch vector left the ball.
struct invalid_state_error : error {
  using error::error;
};

// An observable argument is not what the operation requires
// (non-idempotent projector, non-rank-one reference state, ...).
struct invalid_observable_error : error {
  using error::error;
};

// A scalar parameter is outside its contract (Delta >= epsilon/3, k < 1, ...).
struct parameter_error : error {
  using error::error;
};

// A formula was evaluated outside the regime where it means anything
// (epsilon >= 1/2 for the uncertainty bounds, M < 1, ...).
struct domain_error : error {
  using error::error;
};

// Bad or inconsistent run configuration (exhausted noise script, infeasible
// Monte-Carlo scale, malformed JSON, unknown figure id, ...).
struct config_error : error {
  using error::error;
};

// No estimate can be produced from the data at hand.
struct estimation_error : error {
  using error::error;
};

// The assumed readout model carries no signal (R_x = 0): the estimator
// denominator vanishes identically rather than statistically.
struct unestimable_error : estimation_error {
  using estimation_error::estimation_error;
};

}  // namespace qrs
