// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qrs/bloch.hpp"
#include "qrs/bounds.hpp"
#include "qrs/config.hpp"
#include "qrs/measurement.hpp"
#include "qrs/parallel.hpp"
#include "qrs/protocol.hpp"
#include "qrs/sensing.hpp"
#include "qrs/verify.hpp"

namespace qrs {

struct Theorem1Config {
  std::vector<std::uint64_t> k_values{10, 50, 200};
  std::uint64_t trials = 1000;
  double epsilon = 0.1;
  double delta = 0.05;
};

struct Theorem2Config {
  std::vector<std::uint64_t> k_values{200, 1000};
  std::uint64_t trials = 10000;
  double delta = 0.05;
};

// Shared grid for the two single-qubit RMS suites.
struct RmsGridConfig {
  std::vector<double> epsilons{0.01, 0.05, 0.1};
  std::vector<std::uint64_t> m_values{100, 10000};
  std::uint64_t runs = 2000;
  double omega = 0.05;
  double t = 1.0;
};

struct IndependenceConfig {
  std::uint64_t rounds = 100000;
  double omega_alt = 0.2;
  double t = 1.0;
};

struct HoeffdingConfig {
  std::vector<double> s_values{1.0, 2.0};
  std::uint64_t runs = 10000;
  std::uint64_t M = 100;
  double epsilon = 0.05;
  double omega = 0.05;
  double t = 1.0;
};

struct VerifyConfig {
  Theorem1Config theorem1;
  Theorem2Config theorem2;
  RmsGridConfig theorem3;
  RmsGridConfig theorem4;
  IndependenceConfig independence;
  HoeffdingConfig hoeffding;
  double time_budget_seconds = 3600.0;

  static VerifyConfig from_json(const json& j) {
    VerifyConfig c;
    try {
      if (j.contains("theorem1")) {
        const json& s = j.at("theorem1");
        if (s.contains("k_values")) c.theorem1.k_values = s.at("k_values").get<std::vector<std::uint64_t>>();
        c.theorem1.trials = s.value("trials", c.theorem1.trials);
        c.theorem1.epsilon = s.value("epsilon", c.theorem1.epsilon);
        c.theorem1.delta = s.value("delta", c.theorem1.delta);
      }
      if (j.contains("theorem2")) {
        const json& s = j.at("theorem2");
        if (s.contains("k_values")) c.theorem2.k_values = s.at("k_values").get<std::vector<std::uint64_t>>();
        c.theorem2.trials = s.value("trials", c.theorem2.trials);
        c.theorem2.delta = s.value("delta", c.theorem2.delta);
      }
      const auto grid = [](const json& s, RmsGridConfig& g) {
        if (s.contains("epsilons")) g.epsilons = s.at("epsilons").get<std::vector<double>>();
        if (s.contains("m_values")) g.m_values = s.at("m_values").get<std::vector<std::uint64_t>>();
        g.runs = s.value("runs", g.runs);
        g.omega = s.value("omega", g.omega);
        g.t = s.value("t", g.t);
      };
      if (j.contains("theorem3")) grid(j.at("theorem3"), c.theorem3);
      if (j.contains("theorem4")) grid(j.at("theorem4"), c.theorem4);
      if (j.contains("independence")) {
        const json& s = j.at("independence");
        c.independence.rounds = s.value("rounds", c.independence.rounds);
        c.independence.omega_alt = s.value("omega_alt", c.independence.omega_alt);
        c.independence.t = s.value("t", c.independence.t);
      }
      if (j.contains("hoeffding")) {
        const json& s = j.at("hoeffding");
        if (s.contains("s_values")) c.hoeffding.s_values = s.at("s_values").get<std::vector<double>>();
        c.hoeffding.runs = s.value("runs", c.hoeffding.runs);
        c.hoeffding.M = s.value("M", c.hoeffding.M);
        c.hoeffding.epsilon = s.value("epsilon", c.hoeffding.epsilon);
        c.hoeffding.omega = s.value("omega", c.hoeffding.omega);
        c.hoeffding.t = s.value("t", c.hoeffding.t);
      }
      c.time_budget_seconds = j.value("time_budget_seconds", c.time_budget_seconds);
    } catch (const json::exception& e) {
      throw config_error(std::string("bad verify config: ") + e.what());
    }
    return c;
  }
};

// Rough single-core cost model: a register-pair measurement is the heavy
// unit, a single-qubit Bernoulli draw the light one. Used only to refuse
// configurations that cannot finish inside the time budget.
inline double estimated_runtime_seconds(const VerifyConfig& c) {
  constexpr double kPairSeconds = 3e-7;
  constexpr double kDrawSeconds = 1e-8;
  double pair_ops = 0.0;
  double draw_ops = 0.0;
  for (std::uint64_t k : c.theorem1.k_values)
    pair_ops += static_cast<double>(c.theorem1.trials) * (2.0 * static_cast<double>(k) + 1.0);
  for (std::uint64_t k : c.theorem2.k_values)
    pair_ops += 6.0 * static_cast<double>(c.theorem2.trials) * (2.0 * static_cast<double>(k) + 1.0);
  for (const RmsGridConfig* g : {&c.theorem3, &c.theorem4})
    for (std::uint64_t m : g->m_values)
      draw_ops += static_cast<double>(g->runs) * static_cast<double>(m) *
                  static_cast<double>(g->epsilons.size());
  pair_ops += 2.0 * static_cast<double>(c.independence.rounds) * 5.0;
  draw_ops += 3.0 * static_cast<double>(c.hoeffding.s_values.size()) *
              static_cast<double>(c.hoeffding.runs) * static_cast<double>(c.hoeffding.M);
  return pair_ops * kPairSeconds + draw_ops * kDrawSeconds;
}

struct SuiteReport {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  bool pass = true;
};

// Completeness: with an error-free channel every trial must accept with
// zero observed failures, whatever k.
inline SuiteReport theorem1_suite(const Theorem1Config& cfg, const SplitRng& suite_rng) {
  SuiteReport rep;
  for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
    const std::uint64_t k = cfg.k_values[ki];
    const TestParams params = TestParams::with_k(cfg.epsilon, cfg.delta, 0.0, k);
    const SplitRng k_rng = suite_rng.substream(ki);
    std::vector<std::uint8_t> clean(cfg.trials, 0);
    parallel_for(cfg.trials, [&](std::uint64_t i) {
      SplitRng rng = k_rng.substream(i);
      const TestVerdict verdict =
          run_sampling_test(params, [](std::uint64_t) { return bell_state(0, 0); }, rng);
      clean[i] = verdict.accepted() && verdict.n_fail() == 0;
    });
    std::uint64_t good = 0;
    for (std::uint8_t b : clean) good += b;
    nlohmann::ordered_json entry;
    entry["k"] = k;
    entry["trials"] = cfg.trials;
    entry["accepted_clean"] = good;
    entry["pass"] = (good == cfg.trials);
    rep.pass = rep.pass && (good == cfg.trials);
    rep.entries.push_back(entry);
  }
  return rep;
}

struct BatteryEntry {
  std::string name;
  NoiseSchedule sched;
  double Delta;
};

// Channels chosen so that several sit exactly at the acceptance threshold
// (expected failure rate equal to Delta), where rejection is a coin flip
// and the soundness guarantee is under the most stress.
inline std::vector<BatteryEntry> soundness_battery(std::uint64_t k) {
  const std::uint64_t burst = (8 * k + 99) / 100;  // ceil of 0.02 * 4k
  std::vector<PauliLabel> script(4 * k, PauliLabel::I);
  std::fill(script.begin(), script.begin() + static_cast<std::ptrdiff_t>(burst), PauliLabel::X);
  return {
      {"identity", NoiseSchedule::identity(), 0.0},
      {"iid_x_at_threshold", NoiseSchedule::iid_pauli(0.04, 0.0, 0.0), 0.02},
      {"periodic_x", NoiseSchedule::periodic_pauli(50, PauliLabel::X), 0.02},
      {"periodic_xz_at_threshold", NoiseSchedule::periodic_pauli(50, PauliLabel::Y), 0.02},
      {"scripted_burst", NoiseSchedule::scripted(std::move(script)), 0.02},
      {"iid_xyz_at_threshold", NoiseSchedule::iid_pauli(0.01, 0.01, 0.01), 0.02},
  };
}

// Soundness: the event "test accepts AND the target fidelity sits below the
// certified floor" must occur with frequency at most delta.
inline SuiteReport theorem2_suite(const Theorem2Config& cfg, const SplitRng& suite_rng) {
  SuiteReport rep;
  const Density4 bell = bell_state(0, 0);
  std::uint64_t stream = 0;
  for (std::uint64_t k : cfg.k_values) {
    for (const BatteryEntry& entry : soundness_battery(k)) {
      const double eps = bounds::epsilon_from_resources(k, entry.Delta, cfg.delta);
      const TestParams params = TestParams::with_k(eps, cfg.delta, entry.Delta, k);
      const SplitRng entry_rng = suite_rng.substream(stream++);
      std::vector<std::uint8_t> viol(cfg.trials, 0);
      std::vector<std::uint8_t> acc(cfg.trials, 0);
      std::vector<std::uint32_t> fails(cfg.trials, 0);
      parallel_for(cfg.trials, [&](std::uint64_t i) {
        SplitRng rng = entry_rng.substream(i);
        const TestVerdict verdict = run_sampling_test(
            params,
            [&](std::uint64_t idx) { return apply_noise(bell, idx, entry.sched, rng); }, rng);
        acc[i] = verdict.accepted();
        fails[i] = static_cast<std::uint32_t>(verdict.n_fail());
        viol[i] = verdict.accepted() &&
                  fidelity_pure(verdict.omniscient_target_state(), bell) < verdict.fidelity_floor();
      });
      std::uint64_t viol_count = 0;
      std::uint64_t acc_count = 0;
      double fail_sum = 0.0;
      for (std::uint64_t i = 0; i < cfg.trials; ++i) {
        viol_count += viol[i];
        acc_count += acc[i];
        fail_sum += fails[i];
      }
      const double n = static_cast<double>(cfg.trials);
      const double freq = static_cast<double>(viol_count) / n;
      const double limit = cfg.delta + 3.0 * std::sqrt(cfg.delta * (1.0 - cfg.delta) / n);
      nlohmann::ordered_json e;
      e["k"] = k;
      e["channel"] = entry.name;
      e["epsilon"] = eps;
      e["Delta"] = entry.Delta;
      e["trials"] = cfg.trials;
      e["accept_frequency"] = static_cast<double>(acc_count) / n;
      e["mean_n_fail"] = fail_sum / n;
      e["expected_n_fail"] = expected_fail_rate(entry.sched) * 2.0 * static_cast<double>(k);
      e["violation_frequency"] = freq;
      e["limit"] = limit;
      e["pass"] = (freq <= limit);
      rep.pass = rep.pass && (freq <= limit);
      rep.entries.push_back(e);
    }
  }
  return rep;
}

namespace detail {

// RMS of (estimate - omega) for an estimator that reads M sigma_y samples
// off `state` after phase evolution and inverts with slope `slope`:
// estimate = (2 S_M - 1 - intercept) / (slope * t).
struct RmsResult {
  double rms;
  double sigma;  // standard error of the RMS estimate
};

inline RmsResult sampled_rms(const Density2& state, const SensingField& field,
                             double slope, double intercept, std::uint64_t M,
                             std::uint64_t runs, const SplitRng& point_rng) {
  const Density2 evolved = evolve_phase(state, field);
  const double p = born_probability(evolved, plus_projector(Axis::Y));
  std::vector<double> sq(runs, 0.0);
  parallel_for(runs, [&](std::uint64_t r) {
    SplitRng rng = point_rng.substream(r);
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < M; ++i) ones += rng.bernoulli(p) ? 1 : 0;
    const double s_m = static_cast<double>(ones) / static_cast<double>(M);
    const double est = (2.0 * s_m - 1.0 - intercept) / (slope * field.t);
    const double err = est - field.omega;
    sq[r] = err * err;
  });
  double mean_sq = 0.0;
  for (double v : sq) mean_sq += v;
  mean_sq /= static_cast<double>(runs);
  const double rms = std::sqrt(mean_sq);
  return {rms, rms / std::sqrt(2.0 * static_cast<double>(runs))};
}

}  // namespace detail

// Client upper bound: the worst admissible single-qubit state compatible
// with fidelity 1-eps, estimated with the unit-slope inversion, must stay
// at or below client_upper in RMS error.
inline SuiteReport theorem3_suite(const RmsGridConfig& cfg, const SplitRng& suite_rng) {
  SuiteReport rep;
  std::uint64_t stream = 0;
  for (double eps : cfg.epsilons) {
    const double q = eps - eps * eps;
    const Density2 state = density_from_bloch({1.0 - 2.0 * eps, 2.0 * std::sqrt(q), 0.0});
    for (std::uint64_t m : cfg.m_values) {
      const SensingField field{cfg.omega, cfg.t, 0.0, 0.0, 0.0};
      const auto res = detail::sampled_rms(state, field, 1.0, 0.0, m, cfg.runs,
                                           suite_rng.substream(stream++));
      const double bound = bounds::client_upper(eps, static_cast<double>(m), cfg.t);
      const bool ok = res.rms <= bound + 3.0 * res.sigma;
      nlohmann::ordered_json e;
      e["epsilon"] = eps;
      e["M"] = m;
      e["runs"] = cfg.runs;
      e["rms"] = res.rms;
      e["bound"] = bound;
      e["sigma_rms"] = res.sigma;
      e["pass"] = ok;
      rep.pass = rep.pass && ok;
      rep.entries.push_back(e);
    }
  }
  return rep;
}

// Server lower bound: even the most informative leaked state cannot beat
// server_lower in RMS error, and with the ideal resource the server's raw
// o-bit statistics carry no omega dependence at all.
inline SuiteReport theorem4_suite(const RmsGridConfig& cfg, const IndependenceConfig& ind,
                                  const SplitRng& suite_rng) {
  SuiteReport rep;
  std::uint64_t stream = 0;
  for (double eps : cfg.epsilons) {
    const double q = eps - eps * eps;
    nlohmann::ordered_json e;
    e["epsilon"] = eps;
    if (q == 0.0) {
      e["skipped"] = "leak-free state has no estimator";
      rep.entries.push_back(e);
      continue;
    }
    const double r_x = 2.0 * std::sqrt(q);
    const Density2 state = density_from_bloch({r_x, 0.0, 0.0});
    for (std::uint64_t m : cfg.m_values) {
      const SensingField field{cfg.omega, cfg.t, 0.0, 0.0, 0.0};
      const auto res = detail::sampled_rms(state, field, r_x, 0.0, m, cfg.runs,
                                           suite_rng.substream(stream++));
      const double bound = bounds::server_lower(eps, static_cast<double>(m), cfg.t).value();
      const bool ok = res.rms >= bound - 3.0 * res.sigma;
      nlohmann::ordered_json entry;
      entry["epsilon"] = eps;
      entry["M"] = m;
      entry["runs"] = cfg.runs;
      entry["rms"] = res.rms;
      entry["bound"] = bound;
      entry["sigma_rms"] = res.sigma;
      entry["pass"] = ok;
      rep.pass = rep.pass && ok;
      rep.entries.push_back(entry);
    }
  }

  // Marginal-only server: o frequencies at two different omega values are
  // statistically indistinguishable (two-sample proportion test).
  const TestParams params = TestParams::with_k(0.25, 0.05, 0.0, 1);
  const SplitRng ind_rng = suite_rng.substream(stream);
  const auto o_frequency = [&](double omega, std::uint64_t tag, std::uint64_t* count,
                               std::uint64_t* total, std::uint64_t* aborts) {
    const SensingField field{omega, ind.t, 0.0, 0.0, 0.0};
    const RunRecord run = run_protocol(params, NoiseSchedule::identity(), field, ind.rounds,
                                       AbortPolicy::skip, ind_rng.substream(tag));
    const ServerRunView view = server_view(run);
    *count = 0;
    *total = 0;
    for (const auto& bit : view.o_bits)
      if (bit) {
        *count += *bit;
        ++*total;
      }
    *aborts = run.abort_count;
  };
  std::uint64_t c0 = 0, n0 = 0, a0 = 0, c1 = 0, n1 = 0, a1 = 0;
  o_frequency(0.0, 0, &c0, &n0, &a0);
  o_frequency(ind.omega_alt, 1, &c1, &n1, &a1);
  const double p0 = static_cast<double>(c0) / static_cast<double>(n0);
  const double p1 = static_cast<double>(c1) / static_cast<double>(n1);
  const double pooled = static_cast<double>(c0 + c1) / static_cast<double>(n0 + n1);
  const double denom = std::sqrt(pooled * (1.0 - pooled) *
                                 (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1)));
  const double z = denom > 0.0 ? (p0 - p1) / denom : 0.0;
  const bool ind_ok = std::abs(z) < 5.0 && a0 == 0 && a1 == 0;
  nlohmann::ordered_json ie;
  ie["check"] = "marginal_independence";
  ie["rounds"] = ind.rounds;
  ie["omega_pair"] = {0.0, ind.omega_alt};
  ie["o_frequencies"] = {p0, p1};
  ie["z"] = z;
  ie["pass"] = ind_ok;
  rep.pass = rep.pass && ind_ok;
  rep.entries.push_back(ie);
  return rep;
}

// Finite-confidence intervals: the miss event |estimate - omega| > bound
// occurs with frequency at most 2 exp(-2 s^2) for each bound variant.
inline SuiteReport hoeffding_suite(const HoeffdingConfig& cfg, const SplitRng& suite_rng) {
  SuiteReport rep;
  const double eps = cfg.epsilon;
  const double q = eps - eps * eps;
  const double r_x = 2.0 * std::sqrt(q);
  struct Variant {
    const char* name;
    BlochVector bloch;
    double slope;
  };
  const Variant variants[3] = {
      {"standard", {1.0, 0.0, 0.0}, 1.0},
      {"client_upper", {1.0 - 2.0 * eps, r_x, 0.0}, 1.0},
      {"server_lower", {r_x, 0.0, 0.0}, r_x},
  };
  const double m = static_cast<double>(cfg.M);
  std::uint64_t stream = 0;
  for (double s : cfg.s_values) {
    for (const Variant& v : variants) {
      double bound = 0.0;
      if (std::string(v.name) == "standard")
        bound = bounds::hoeffding_standard(m, cfg.t, s);
      else if (std::string(v.name) == "client_upper")
        bound = bounds::hoeffding_client_upper(eps, m, cfg.t, s);
      else
        bound = bounds::hoeffding_server_lower(eps, m, cfg.t, s).value();

      const Density2 state = density_from_bloch(v.bloch);
      const Density2 evolved = evolve_phase(state, SensingField{cfg.omega, cfg.t, 0.0, 0.0, 0.0});
      const double p = born_probability(evolved, plus_projector(Axis::Y));
      const SplitRng var_rng = suite_rng.substream(stream++);
      std::vector<std::uint8_t> miss(cfg.runs, 0);
      parallel_for(cfg.runs, [&](std::uint64_t r) {
        SplitRng rng = var_rng.substream(r);
        std::uint64_t ones = 0;
        for (std::uint64_t i = 0; i < cfg.M; ++i) ones += rng.bernoulli(p) ? 1 : 0;
        const double s_m = static_cast<double>(ones) / m;
        const double est = (2.0 * s_m - 1.0) / (v.slope * cfg.t);
        miss[r] = std::abs(est - cfg.omega) > bound;
      });
      std::uint64_t miss_count = 0;
      for (std::uint8_t b : miss) miss_count += b;
      const double n = static_cast<double>(cfg.runs);
      const double freq = static_cast<double>(miss_count) / n;
      const double cap = 2.0 * std::exp(-2.0 * s * s);
      const double limit = cap + 3.0 * std::sqrt(cap * (1.0 - cap) / n);
      nlohmann::ordered_json e;
      e["s"] = s;
      e["variant"] = v.name;
      e["runs"] = cfg.runs;
      e["miss_frequency"] = freq;
      e["bound"] = bound;
      e["limit"] = limit;
      e["pass"] = (freq <= limit);
      rep.pass = rep.pass && (freq <= limit);
      rep.entries.push_back(e);
    }
  }
  return rep;
}

// Runs all suites and aggregates a machine-readable report. Refuses up
// front when the cost model says the configuration cannot finish in time.
inline nlohmann::ordered_json verify_theorems(const VerifyConfig& cfg, std::uint64_t seed) {
  const double est = estimated_runtime_seconds(cfg);
  if (est > cfg.time_budget_seconds)
    throw config_error("refusing verify run: estimated runtime " + std::to_string(est) +
                       " s exceeds budget " + std::to_string(cfg.time_budget_seconds) +
                       " s; lower k_values/trials/runs or raise time_budget_seconds");
  const SplitRng root(seed);
  const SuiteReport t1 = theorem1_suite(cfg.theorem1, root.substream(1));
  const SuiteReport t2 = theorem2_suite(cfg.theorem2, root.substream(2));
  const SuiteReport t3 = theorem3_suite(cfg.theorem3, root.substream(3));
  const SuiteReport t4 = theorem4_suite(cfg.theorem4, cfg.independence, root.substream(4));
  const SuiteReport hf = hoeffding_suite(cfg.hoeffding, root.substream(5));

  nlohmann::ordered_json report;
  const auto pack = [](const SuiteReport& r) {
    nlohmann::ordered_json s;
    s["entries"] = r.entries;
    s["pass"] = r.pass;
    return s;
  };
  report["seed"] = seed;
  report["estimated_runtime_seconds"] = est;
  report["theorem1"] = pack(t1);
  report["theorem2"] = pack(t2);
  report["theorem3"] = pack(t3);
  report["theorem4"] = pack(t4);
  report["hoeffding"] = pack(hf);
  report["all_pass"] = t1.pass && t2.pass && t3.pass && t4.pass && hf.pass;
  return report;
}

}  // namespace qrs
