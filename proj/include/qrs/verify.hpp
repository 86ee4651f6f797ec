// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "qrs/bell.hpp"
#include "qrs/measurement.hpp"
#include "qrs/rng.hpp"

namespace qrs {

// Registers needed so that accepting with at most 2k*Delta failures certifies
// target fidelity >= 1 - epsilon with confidence 1 - delta:
//   k = ceil( 75 * ln(2/delta) / (8 * (epsilon - 3*Delta)^2) )
// (natural logarithm; the 75/8 and the (epsilon-3*Delta)/...-scaled deviation
// come from chaining two Serfling tail bounds, see joint_confidence below).
// The test consumes 4k registers: k X-tested, k Z-tested, 1 target, the rest
// discarded.
inline std::uint64_t required_k(double epsilon, double delta, double Delta) {
  if (!(epsilon > 0.0) || epsilon > 1.0) throw parameter_error("epsilon must be in (0, 1]");
  if (!(delta > 0.0) || delta >= 1.0) throw parameter_error("delta must be in (0, 1)");
  if (Delta < 0.0) throw parameter_error("Delta must be nonnegative");
  if (!(Delta < epsilon / 3.0)) throw parameter_error("Delta must be below epsilon/3");
  const double margin = epsilon - 3.0 * Delta;
  return static_cast<std::uint64_t>(
      std::ceil(75.0 * std::log(2.0 / delta) / (8.0 * margin * margin)));
}

// One-sided Serfling tail for sampling K of N binary items without
// replacement: the unseen-mean overshoot by nu has probability at most
//   exp( -2 nu^2 N K^2 / ((N + K) (K + 1)) ).
inline double serfling_tail(double nu, std::uint64_t N, std::uint64_t K) {
  if (nu < 0.0) throw parameter_error("deviation nu must be nonnegative");
  if (K < 1 || N < 1) throw parameter_error("serfling_tail needs N, K >= 1");
  const double n = static_cast<double>(N);
  const double kk = static_cast<double>(K);
  return std::exp(-2.0 * nu * nu * n * kk * kk / ((n + kk) * (kk + 1.0)));
}

// Joint success probability of the two tests at deviation nu = 2(eps-3Delta)/5.
// The X test sees K = k of N = 3k candidates, the Z test K = k of N = 2k;
// the product is what the k formula above pushes past 1 - delta.
inline double joint_confidence(double epsilon, double Delta, std::uint64_t k) {
  if (!(epsilon > 0.0) || epsilon > 1.0) throw parameter_error("epsilon must be in (0, 1]");
  if (Delta < 0.0 || !(Delta < epsilon / 3.0))
    throw parameter_error("Delta must be in [0, epsilon/3)");
  if (k < 1) throw parameter_error("k must be >= 1");
  const double nu = 2.0 * (epsilon - 3.0 * Delta) / 5.0;
  const double q_x = 1.0 - serfling_tail(nu, 3 * k, k);
  const double q_z = 1.0 - serfling_tail(nu, 2 * k, k);
  return q_x * q_z;
}

// Certified fidelity floor after observing n_fail failures: the acceptance
// statement is F >= 1 - epsilon + 3*Delta - 3*n_fail/(2k). Deliberately not
// clamped; a negative floor is a meaningful "certifies nothing" result.
inline double soundness_floor(double epsilon, double Delta, std::uint64_t k,
                              std::uint64_t n_fail) {
  if (k < 1) throw parameter_error("k must be >= 1");
  return 1.0 - epsilon + 3.0 * Delta -
         3.0 * static_cast<double>(n_fail) / (2.0 * static_cast<double>(k));
}

struct TestParams {
  double epsilon = 0.0;
  double delta = 0.0;
  double Delta = 0.0;
  std::uint64_t k = 0;

  // k from the Serfling budget.
  static TestParams derive(double epsilon, double delta, double Delta) {
    TestParams p{epsilon, delta, Delta, required_k(epsilon, delta, Delta)};
    return p;
  }

  // Explicit k for desk-scale simulation; the certificate then holds at
  // whatever confidence joint_confidence(epsilon, Delta, k) gives.
  static TestParams with_k(double epsilon, double delta, double Delta, std::uint64_t k) {
    if (k < 1) throw parameter_error("k must be >= 1");
    if (!(epsilon > 0.0) || epsilon > 1.0) throw parameter_error("epsilon must be in (0, 1]");
    if (!(delta > 0.0) || delta >= 1.0) throw parameter_error("delta must be in (0, 1)");
    if (Delta < 0.0 || !(Delta < epsilon / 3.0))
      throw parameter_error("Delta must be in [0, epsilon/3)");
    return TestParams{epsilon, delta, Delta, k};
  }

  std::uint64_t total_registers() const { return 4 * k; }
};

enum class RegisterRole : std::uint8_t { x_test, z_test, target, discard };

struct RegisterPartition {
  std::vector<RegisterRole> roles;  // size 4k, indexed by register
  std::uint64_t target_index = 0;
  std::uint64_t k = 0;

  std::vector<std::uint64_t> indices_with(RegisterRole role) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < roles.size(); ++i)
      if (roles[i] == role) out.push_back(i);
    return out;
  }
};

// Uniform random split of 4k registers into k X-tested, k Z-tested, one
// target and 2k-1 discarded: one shuffle, then prefix slices.
inline RegisterPartition partition_registers(std::uint64_t k, SplitRng& rng) {
  if (k < 1) throw parameter_error("k must be >= 1");
  const std::uint64_t total = 4 * k;
  std::vector<std::uint64_t> order(total);
  for (std::uint64_t i = 0; i < total; ++i) order[i] = i;
  rng.shuffle(order);
  RegisterPartition part;
  part.k = k;
  part.roles.assign(total, RegisterRole::discard);
  for (std::uint64_t i = 0; i < k; ++i) part.roles[order[i]] = RegisterRole::x_test;
  for (std::uint64_t i = k; i < 2 * k; ++i) part.roles[order[i]] = RegisterRole::z_test;
  part.target_index = order[2 * k];
  part.roles[part.target_index] = RegisterRole::target;
  return part;
}

// Result of one run of the sampling test over a batch of 4k registers.
// The target register is physically retained (take_target) for whoever ran
// the test; reading its matrix without measuring it (omniscient_target_state)
// is simulation-only introspection, not available to protocol parties.
class TestVerdict {
 public:
  TestVerdict(std::uint64_t n_fail, bool accepted, double fidelity_floor, Density4 target)
      : n_fail_(n_fail),
        accepted_(accepted),
        fidelity_floor_(fidelity_floor),
        target_(std::move(target)) {}

  std::uint64_t n_fail() const { return n_fail_; }
  bool accepted() const { return accepted_; }
  double fidelity_floor() const { return fidelity_floor_; }

  const Density4& take_target() const { return target_; }
  const Density4& omniscient_target_state() const { return target_; }

 private:
  std::uint64_t n_fail_;
  bool accepted_;
  double fidelity_floor_;
  Density4 target_;
};

struct PairOutcomeRecord {
  std::uint64_t register_index;
  Axis axis;
  int transmitted_bit;
  int kept_bit;
};

// Run the sampling test against a caller-chosen partition. `source` maps a
// register index in [0, 4k) to the register-pair state arriving at that
// position in the stream; only tested and target indices are materialized.
// Acceptance compares the failure count against 2k*Delta as reals, with no
// rounding of the threshold.
template <typename Source>
TestVerdict run_sampling_test_with_partition(const TestParams& params,
                                             const RegisterPartition& part, Source&& source,
                                             SplitRng& rng,
                                             std::vector<PairOutcomeRecord>* outcome_log = nullptr) {
  if (part.k != params.k || part.roles.size() != params.total_registers())
    throw parameter_error("partition size does not match params");
  std::uint64_t n_fail = 0;
  std::optional<Density4> target;
  const std::uint64_t total = params.total_registers();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    switch (part.roles[idx]) {
      case RegisterRole::x_test:
      case RegisterRole::z_test: {
        const Axis axis = part.roles[idx] == RegisterRole::x_test ? Axis::X : Axis::Z;
        const Density4 rho = source(idx);
        auto [transmitted, kept] = pauli_pair_measure(rho, axis, rng);
        if (transmitted.bit != kept.bit) ++n_fail;
        if (outcome_log)
          outcome_log->push_back({idx, axis, transmitted.bit, kept.bit});
        break;
      }
      case RegisterRole::target:
        target.emplace(source(idx));
        break;
      case RegisterRole::discard:
        break;
    }
  }
  const bool accepted =
      static_cast<double>(n_fail) <= 2.0 * static_cast<double>(params.k) * params.Delta;
  const double floor = soundness_floor(params.epsilon, params.Delta, params.k, n_fail);
  return TestVerdict(n_fail, accepted, floor, std::move(*target));
}

// As above with the partition drawn here, uniformly.
template <typename Source>
TestVerdict run_sampling_test(const TestParams& params, Source&& source, SplitRng& rng,
                              std::vector<PairOutcomeRecord>* outcome_log = nullptr) {
  const RegisterPartition part = partition_registers(params.k, rng);
  return run_sampling_test_with_partition(params, part, std::forward<Source>(source), rng,
                                          outcome_log);
}

}  // namespace qrs
