// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qrs/bloch.hpp"
#include "qrs/noise.hpp"
#include "qrs/parallel.hpp"
#include "qrs/sensing.hpp"
#include "qrs/verify.hpp"

namespace qrs {

// One round, in order:
//   1. parameters announced        5. X/Z tests as registers arrive
//   2. server prepares 4k pairs    6. accept/abort on the failure count
//   3. client picks the partition  7. server evolves the kept probe under
//   4. halves stream through the      the field and reads out sigma_y -> o
//      channel; client measures    8. client forms s xor o
//      its target half -> s
// The client's target readout s never appears in any message; the server
// only ever sees the test outcomes and contributes o.

enum class Party : std::uint8_t { client, server };

struct MsgAnnounceParams {
  double epsilon;
  double delta;
  double Delta;
  std::uint64_t k;
};
struct MsgPartitionChoice {
  std::uint64_t target_index;
  std::vector<RegisterRole> roles;
};
struct MsgRegisterSent {
  std::uint64_t register_index;
};
struct MsgTestOutcome {
  std::uint64_t register_index;
  Party party;
  int bit;
};
struct MsgAbort {
  std::uint64_t n_fail;
};
struct MsgReadout {
  int o;
};

using Message = std::variant<MsgAnnounceParams, MsgPartitionChoice, MsgRegisterSent,
                             MsgTestOutcome, MsgAbort, MsgReadout>;
using MessageLog = std::vector<Message>;

// What actually happened in the simulated round, beyond what either party
// can see: the true pre-measurement target state and the realized probe.
struct OmniscientRoundView {
  Density4 target_state;
  std::optional<Density2> probe_state;  // kept half after the client's readout
};

class RoundRecord {
 public:
  std::uint64_t round_index = 0;
  std::uint64_t n_fail = 0;
  bool accepted = false;
  bool aborted = false;
  double fidelity_floor = 0.0;
  // Client-private readout of the target's transmitted half, recorded in the
  // Hadamard-labelled basis: the +1 eigenvalue of sigma_x maps to s = 0 (the
  // kept half of a clean pair is then |+>), -1 maps to s = 1 (kept |->).
  int s = 0;
  std::optional<int> o;            // server readout; absent when aborted
  std::optional<int> sensing_bit;  // s xor o

  RoundRecord(std::uint64_t index, const TestVerdict& verdict, int s_bit,
              std::optional<int> o_bit, OmniscientRoundView omni)
      : round_index(index),
        n_fail(verdict.n_fail()),
        accepted(verdict.accepted()),
        aborted(!verdict.accepted()),
        fidelity_floor(verdict.fidelity_floor()),
        s(s_bit),
        o(o_bit),
        omni_(std::move(omni)) {
    if (o) sensing_bit = s ^ *o;
  }

  // Simulation-only introspection; no protocol party gets this.
  const OmniscientRoundView& omniscient() const { return omni_; }

 private:
  OmniscientRoundView omni_;
};

enum class AbortPolicy : std::uint8_t { skip, retry, halt };

inline constexpr std::uint64_t kRetryCap = 1000;

// One protocol round. The round's randomness must come from a dedicated
// substream so rounds can run in any order. Message logging is optional and
// reconstructs the on-the-wire order (announce, partition, then per register
// a send followed by its two test outcomes, then abort-or-readout).
inline RoundRecord run_round(const TestParams& params, const NoiseSchedule& sched,
                             const SensingField& field, std::uint64_t round_index,
                             SplitRng rng, MessageLog* log = nullptr) {
  field.validate();
  if (log) log->push_back(MsgAnnounceParams{params.epsilon, params.delta, params.Delta, params.k});

  const RegisterPartition part = partition_registers(params.k, rng);
  if (log) log->push_back(MsgPartitionChoice{part.target_index, part.roles});

  auto source = [&](std::uint64_t idx) {
    return apply_noise(bell_state(0, 0), idx, sched, rng);
  };
  std::vector<PairOutcomeRecord> outcomes;
  const TestVerdict verdict =
      run_sampling_test_with_partition(params, part, source, rng, log ? &outcomes : nullptr);

  if (log) {
    std::size_t next_outcome = 0;
    for (std::uint64_t idx = 0; idx < params.total_registers(); ++idx) {
      log->push_back(MsgRegisterSent{idx});
      if (next_outcome < outcomes.size() && outcomes[next_outcome].register_index == idx) {
        const auto& rec = outcomes[next_outcome++];
        log->push_back(MsgTestOutcome{idx, Party::client, rec.transmitted_bit});
        log->push_back(MsgTestOutcome{idx, Party::server, rec.kept_bit});
      }
    }
  }

  // Client reads its target half along x before the verdict is acted on;
  // the kept half becomes the server's probe.
  auto [x_outcome, probe] = measure_slot(verdict.take_target(), Slot::transmitted, Axis::X, rng);
  const int s = 1 - x_outcome.bit;

  if (!verdict.accepted()) {
    if (log) log->push_back(MsgAbort{verdict.n_fail()});
    return RoundRecord(round_index, verdict, s, std::nullopt,
                       OmniscientRoundView{verdict.omniscient_target_state(), std::nullopt});
  }

  const Density2 evolved = evolve_phase(probe, field);
  const int o = sample_outcome(evolved, Axis::Y, rng).first.bit;
  if (log) log->push_back(MsgReadout{o});
  return RoundRecord(round_index, verdict, s, o,
                     OmniscientRoundView{verdict.omniscient_target_state(), probe});
}

struct RunRecord {
  std::vector<RoundRecord> rounds;
  double S_M = 0.0;  // mean sensing bit over accepted rounds
  std::uint64_t accepted_count = 0;
  std::uint64_t abort_count = 0;
  TestParams params;
  SensingField field;
};

// M rounds under one (params, schedule, field) setting, all fed from
// substreams of `rng` keyed by round index (and retry attempt), so the
// execution schedule cannot change the outcome. Abort handling:
//   skip  - aborted rounds are recorded and excluded from S_M;
//   retry - redraw the round (fresh registers, same index) up to kRetryCap;
//   halt  - stop the run at the first abort (necessarily sequential).
inline RunRecord run_protocol(const TestParams& params, const NoiseSchedule& sched,
                              const SensingField& field, std::uint64_t M,
                              AbortPolicy policy, const SplitRng& rng) {
  if (M < 1) throw parameter_error("run_protocol needs M >= 1");
  RunRecord run;
  run.params = params;
  run.field = field;
  run.rounds.reserve(M);

  auto make_round = [&](std::uint64_t index) {
    SplitRng base = rng.substream(index);
    if (policy != AbortPolicy::retry) return run_round(params, sched, field, index, base);
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (attempt >= kRetryCap)
        throw config_error("abort retry cap exceeded; channel too noisy to certify");
      RoundRecord rec = run_round(params, sched, field, index, base.substream(attempt));
      if (rec.accepted) return rec;
      ++run.abort_count;  // retried aborts still count as aborts
    }
  };

  if (policy == AbortPolicy::halt) {
    for (std::uint64_t i = 0; i < M; ++i) {
      run.rounds.push_back(make_round(i));
      if (run.rounds.back().aborted) break;
    }
  } else if (policy == AbortPolicy::retry) {
    for (std::uint64_t i = 0; i < M; ++i) run.rounds.push_back(make_round(i));
  } else {
    std::vector<std::optional<RoundRecord>> slots(M);
    parallel_for(M, [&](std::size_t i) {
      slots[i].emplace(run_round(params, sched, field, i, rng.substream(i)));
    });
    for (auto& slot : slots) run.rounds.push_back(std::move(*slot));
  }

  std::uint64_t sum = 0;
  for (const auto& rec : run.rounds) {
    if (rec.aborted) {
      ++run.abort_count;
    } else {
      ++run.accepted_count;
      sum += static_cast<std::uint64_t>(*rec.sensing_bit);
    }
  }
  if (run.accepted_count == 0)
    throw estimation_error("every round aborted; nothing to estimate from");
  run.S_M = static_cast<double>(sum) / static_cast<double>(run.accepted_count);
  return run;
}

// Client's point estimate: invert P(s xor o = 1) = (1 + sin(omega t))/2 at
// the linearization point, omega = (2 S_M - 1)/t.
inline double client_estimate(const RunRecord& run) {
  if (run.accepted_count == 0) throw estimation_error("no accepted rounds");
  return (2.0 * run.S_M - 1.0) / run.field.t;
}

// Everything the server's side of the wire contains about the sensing stage.
struct ServerRunView {
  std::vector<std::optional<int>> o_bits;  // per round; absent when aborted
  double t = 1.0;
};

inline ServerRunView server_view(const RunRecord& run) {
  ServerRunView view;
  view.t = run.field.t;
  view.o_bits.reserve(run.rounds.size());
  for (const auto& rec : run.rounds) view.o_bits.push_back(rec.o);
  return view;
}

// Estimate omega from the o bits alone, given an assumed probe state with
// Bloch vector R: invert P(o = 1) ~ (1 + R_y + R_x omega t)/2. With R_x = 0
// the o statistics carry no omega dependence at all and no estimate exists.
inline double server_estimate(const ServerRunView& view, const BlochVector& assumed_state) {
  if (assumed_state.x == 0.0)
    throw unestimable_error("assumed probe has R_x = 0: readout is omega-independent");
  std::uint64_t sum = 0;
  std::uint64_t count = 0;
  for (const auto& bit : view.o_bits) {
    if (bit) {
      sum += static_cast<std::uint64_t>(*bit);
      ++count;
    }
  }
  if (count == 0) throw estimation_error("no readout bits to estimate from");
  const double s_srv = static_cast<double>(sum) / static_cast<double>(count);
  return (2.0 * s_srv - 1.0 - assumed_state.y) / (assumed_state.x * view.t);
}

}  // namespace qrs
