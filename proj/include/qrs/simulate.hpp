// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "qrs/bloch.hpp"
#include "qrs/config.hpp"
#include "qrs/curves.hpp"
#include "qrs/parallel.hpp"
#include "qrs/protocol.hpp"
#include "qrs/transcript.hpp"

namespace qrs {

// Fraction of registers 0..n-1 carrying each error label, averaged over the
// schedule's randomness. Order matches PauliLabel: I, X, Y, Z.
inline std::array<double, 4> average_label_weights(const NoiseSchedule& sched,
                                                   std::uint64_t n) {
  std::array<double, 4> w{1.0, 0.0, 0.0, 0.0};
  if (n == 0) throw parameter_error("average_label_weights: n must be >= 1");
  switch (sched.kind) {
    case NoiseSchedule::Kind::identity:
      break;
    case NoiseSchedule::Kind::iid_pauli:
      w[1] = sched.p_x;
      w[2] = sched.p_y;
      w[3] = sched.p_z;
      w[0] = 1.0 - sched.p_x - sched.p_y - sched.p_z;
      break;
    case NoiseSchedule::Kind::periodic_pauli: {
      const std::uint64_t fires =
          (sched.offset < n) ? (n - 1 - sched.offset) / sched.period + 1 : 0;
      const double f = static_cast<double>(fires) / static_cast<double>(n);
      w[static_cast<int>(sched.op)] = f;
      w[0] = 1.0 - f;
      break;
    }
    case NoiseSchedule::Kind::scripted: {
      std::uint64_t counts[4] = {0, 0, 0, 0};
      const std::uint64_t span = std::min<std::uint64_t>(sched.script.size(), n);
      for (std::uint64_t i = 0; i < span; ++i)
        ++counts[static_cast<int>(sched.script[i])];
      counts[0] += n - span;  // indices past the script are error-free
      for (int a = 0; a < 4; ++a)
        w[a] = static_cast<double>(counts[a]) / static_cast<double>(n);
      break;
    }
  }
  return w;
}

// Channel-averaged joint state of one register after transmission.
inline Density4 channel_averaged_state(const std::array<double, 4>& w) {
  const Density4 bell = bell_state(0, 0);
  Mat4 acc = Mat4::Zero();
  const PauliLabel labels[4] = {PauliLabel::I, PauliLabel::X, PauliLabel::Y,
                                PauliLabel::Z};
  for (int a = 0; a < 4; ++a)
    if (w[a] != 0.0) acc += w[a] * apply_pauli_first(bell, labels[a]).matrix();
  return Density4::trusted(acc);
}

// What the server can assume about its probe with no knowledge of s: the
// unconditional kept marginal. For any Pauli channel acting on the
// transmitted half this is I/2, which is the asymmetry mechanism.
inline BlochVector marginal_assumed_bloch(const NoiseSchedule& sched,
                                          const TestParams& params) {
  const Density4 avg = channel_averaged_state(
      average_label_weights(sched, params.total_registers()));
  return bloch_from_density(partial_trace(avg, Slot::kept));
}

// What an observer who also holds the client's hidden s bits can assume:
// the s-corrected probe average rho_0 = sum_s sigma_z^s rho^(s) sigma_z^s,
// whose sigma_y statistics after evolution reproduce the sensing bit s XOR o.
inline BlochVector omniscient_assumed_bloch(const NoiseSchedule& sched,
                                            const TestParams& params) {
  const Density4 avg = channel_averaged_state(
      average_label_weights(sched, params.total_registers()));
  Mat2 rho0 = Mat2::Zero();
  for (int s = 0; s < 2; ++s) {
    // s = 0 corresponds to the +1 sigma_x outcome.
    const Mat2 proj = (s == 0) ? plus_projector(Axis::X) : minus_projector(Axis::X);
    const Mat4 pi = kron(proj, identity2());
    const Mat4 collapsed = pi * avg.matrix() * pi;
    const Mat2 cond = partial_trace(Density4::trusted(collapsed), Slot::kept).matrix();
    rho0 += (s == 0) ? cond : Mat2((sigma_z() * cond * sigma_z().adjoint()));
  }
  return bloch_from_density(Density2::trusted(rho0));
}

// Inverts P(bit = 1) = (1 + R_y + R_x * omega * t) / 2 for a known
// pre-evolution state; same inversion server_estimate applies to o bits.
inline std::optional<double> estimate_from_bit_mean(double mean_bit,
                                                    const BlochVector& assumed,
                                                    double t) {
  if (assumed.x == 0.0) return std::nullopt;
  return (2.0 * mean_bit - 1.0 - assumed.y) / (assumed.x * t);
}

struct TrialSummary {
  std::uint64_t trial = 0;
  double omega_true = 0.0;
  double client = 0.0;
  std::optional<double> omniscient;
  std::optional<double> marginal;
  std::uint64_t accepted = 0;
  std::uint64_t aborted = 0;
};

struct SimulationOutputs {
  std::vector<TrialSummary> trials;
  std::string summary_csv;
  std::string client_transcript;
  std::string server_transcript;
};

// Stream derivation: seed -> trial substream -> round substream, so results
// do not depend on the worker count.
inline SimulationOutputs run_simulate(const SimulateConfig& cfg, std::uint64_t seed) {
  const SplitRng root(seed);
  std::vector<std::optional<RunRecord>> runs(cfg.trials);
  parallel_for(cfg.trials, [&](std::uint64_t i) {
    runs[i] = run_protocol(cfg.params, cfg.noise, cfg.field, cfg.M,
                           cfg.abort_policy, root.substream(i));
  });

  const BlochVector omni = omniscient_assumed_bloch(cfg.noise, cfg.params);
  const BlochVector marg = marginal_assumed_bloch(cfg.noise, cfg.params);

  SimulationOutputs out;
  std::string csv = "trial,omega_true,client_estimate,omniscient_server_estimate,"
                    "marginal_server_estimate,accepted_rounds,abort_count\n";
  std::string client_lines;
  std::string server_lines;
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    const RunRecord& run = *runs[i];
    TrialSummary row;
    row.trial = i;
    row.omega_true = cfg.field.omega;
    row.client = client_estimate(run);
    row.omniscient = estimate_from_bit_mean(run.S_M, omni, cfg.field.t);
    const ServerRunView view = server_view(run);
    if (marg.x != 0.0)
      row.marginal = server_estimate(view, marg);
    row.accepted = run.accepted_count;
    row.aborted = run.abort_count;
    out.trials.push_back(row);

    csv += std::to_string(row.trial);
    csv += ',';
    csv += detail::fmt17(row.omega_true);
    csv += ',';
    csv += detail::fmt17(row.client);
    csv += ',';
    csv += row.omniscient ? detail::fmt17(*row.omniscient) : "unestimable";
    csv += ',';
    csv += row.marginal ? detail::fmt17(*row.marginal) : "unestimable";
    csv += ',';
    csv += std::to_string(row.accepted);
    csv += ',';
    csv += std::to_string(row.aborted);
    csv += '\n';

    for (const RoundRecord& rec : run.rounds) {
      client_lines += round_to_json(rec, false, i).dump();
      client_lines += '\n';
      server_lines += round_to_json(rec, true, i).dump();
      server_lines += '\n';
    }
  }
  out.summary_csv = std::move(csv);
  out.client_transcript = std::move(client_lines);
  out.server_transcript = std::move(server_lines);
  return out;
}

inline void write_simulation_files(const std::filesystem::path& dir,
                                   const SimulationOutputs& out) {
  std::filesystem::create_directories(dir);
  const auto dump = [&](const char* name, const std::string& payload) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw config_error(std::string("cannot open output file: ") + name);
    f << payload;
  };
  dump("summary.csv", out.summary_csv);
  dump("transcript_client.jsonl", out.client_transcript);
  dump("transcript_server.jsonl", out.server_transcript);
}

}  // namespace qrs
