// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrs/curves.hpp"
#include "qrs/noise.hpp"
#include "qrs/protocol.hpp"

namespace qrs {

using json = nlohmann::json;

inline PauliLabel pauli_label_from_string(const std::string& s) {
  if (s == "I") return PauliLabel::I;
  if (s == "X") return PauliLabel::X;
  if (s == "Y" || s == "XZ") return PauliLabel::Y;  // XZ conjugates like Y
  if (s == "Z") return PauliLabel::Z;
  throw config_error("unknown Pauli label: " + s);
}

// Tagged-object form:
//   {"kind": "identity"}
//   {"kind": "iid_pauli", "p_x": 0.05, "p_y": 0, "p_z": 0}
//   {"kind": "periodic_pauli", "period": 10, "op": "X", "offset": 9}
//   {"kind": "scripted", "ops": ["I", "X", "Z", ...]}
// periodic offset defaults to period-1; op accepts X, Z, XZ (or Y).
inline NoiseSchedule noise_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw config_error("noise schedule must be a tagged object with a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "identity") return NoiseSchedule::identity();
    if (kind == "iid_pauli")
      return NoiseSchedule::iid_pauli(j.value("p_x", 0.0), j.value("p_y", 0.0),
                                      j.value("p_z", 0.0));
    if (kind == "periodic_pauli") {
      const auto period = j.at("period").get<std::uint64_t>();
      const PauliLabel op = pauli_label_from_string(j.at("op").get<std::string>());
      if (j.contains("offset"))
        return NoiseSchedule::periodic_pauli(period, op, j.at("offset").get<std::uint64_t>());
      return NoiseSchedule::periodic_pauli(period, op);
    }
    if (kind == "scripted") {
      std::vector<PauliLabel> labels;
      for (const auto& item : j.at("ops"))
        labels.push_back(pauli_label_from_string(item.get<std::string>()));
      return NoiseSchedule::scripted(std::move(labels));
    }
  } catch (const json::exception& e) {
    throw config_error(std::string("bad noise schedule: ") + e.what());
  }
  throw config_error("unknown noise kind: " + kind);
}

struct SimulateConfig {
  TestParams params = TestParams::with_k(0.1, 0.05, 0.0, 5);
  SensingField field{0.05, 1.0, 0.0, 0.0, 0.0};
  std::uint64_t M = 1000;
  std::uint64_t trials = 10;
  NoiseSchedule noise = NoiseSchedule::identity();
  AbortPolicy abort_policy = AbortPolicy::skip;

  static SimulateConfig from_json(const json& j) {
    SimulateConfig c;
    try {
      const double eps = j.value("epsilon", 0.1);
      const double delta = j.value("delta", 0.05);
      const double Delta = j.value("Delta", 0.0);
      if (j.contains("k"))
        c.params = TestParams::with_k(eps, delta, Delta, j.at("k").get<std::uint64_t>());
      else
        c.params = TestParams::derive(eps, delta, Delta);
      c.field.omega = j.value("omega", 0.05);
      c.field.t = j.value("t", 1.0);
      c.field.t_p = j.value("t_p", 0.0);
      c.field.t_r = j.value("t_r", 0.0);
      c.field.T = j.value("T", 0.0);
      c.field.validate();
      if (j.contains("M"))
        c.M = j.at("M").get<std::uint64_t>();
      else if (c.field.T > 0.0)
        c.M = c.field.repetition_count();
      c.trials = j.value("trials", std::uint64_t{10});
      if (c.trials < 1) throw config_error("trials must be >= 1");
      if (j.contains("noise")) c.noise = noise_from_json(j.at("noise"));
      const std::string policy = j.value("abort_policy", std::string("skip"));
      if (policy == "skip")
        c.abort_policy = AbortPolicy::skip;
      else if (policy == "retry")
        c.abort_policy = AbortPolicy::retry;
      else if (policy == "halt")
        c.abort_policy = AbortPolicy::halt;
      else
        throw config_error("unknown abort_policy: " + policy);
    } catch (const json::exception& e) {
      throw config_error(std::string("bad simulate config: ") + e.what());
    }
    return c;
  }
};

namespace detail {

inline std::vector<double> one_two_five_grid(double lo, double hi) {
  std::vector<double> grid;
  for (double decade = 1.0; decade <= hi; decade *= 10.0) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double v = m * decade;
      if (v >= lo && v <= hi) grid.push_back(v);
    }
  }
  return grid;
}

inline std::vector<double> grid_from_json(const json& j, const char* key,
                                          std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : j.at(key)) out.push_back(item.get<double>());
  return out;
}

}  // namespace detail

struct CurvesConfig {
  int fig = 3;
  double t = 1.0;
  double s_tilde = 2.0;
  double delta = 1e-6;  // figs 6-9
  double Delta = 0.0;
  std::vector<Fig3Series> fig3_series = fig3_default_series();
  std::vector<double> eps_grid;   // fig3
  std::vector<double> eps_list;   // fig5 series
  std::vector<double> m_grid;     // figs 5, 7, 9
  std::vector<double> n_grid;     // figs 6, 8
  std::vector<double> m_list;     // figs 6, 8 series
  std::vector<double> n_list;     // figs 7, 9 series

  static CurvesConfig from_json(const json& j, int fig) {
    CurvesConfig c;
    c.fig = fig;
    try {
      c.t = j.value("t", 1.0);
      c.s_tilde = j.value("s_tilde", 2.0);
      c.delta = j.value("delta", 1e-6);
      c.Delta = j.value("Delta", 0.0);
      c.eps_grid = detail::grid_from_json(j, "epsilon_grid", [] {
        std::vector<double> g;
        for (int i = 1; i <= 50; ++i) g.push_back(0.01 * i);
        return g;
      }());
      c.eps_list = detail::grid_from_json(j, "epsilon_list", {0.0, 1e-3, 1e-2, 1e-1});
      c.m_grid = detail::grid_from_json(j, "m_grid", detail::one_two_five_grid(1.0, 1e6));
      c.n_grid = detail::grid_from_json(j, "n_grid", detail::one_two_five_grid(1e5, 1e12));
      c.m_list = detail::grid_from_json(j, "m_list", {1.0, 10.0, 100.0, 1000.0});
      c.n_list = detail::grid_from_json(j, "n_list", {8e7, 8e8, 8e9});
      if (j.contains("series")) {
        c.fig3_series.clear();
        for (const auto& item : j.at("series")) {
          Fig3Series s;
          s.delta = item.value("delta", 1e-3);
          if (item.contains("Delta") && item.at("Delta").is_string()) {
            const std::string str = item.at("Delta").get<std::string>();
            if (str.rfind("eps/", 0) != 0)
              throw config_error("fractional Delta must look like \"eps/10\"");
            s.Delta_is_fraction = true;
            s.Delta = 1.0 / std::stod(str.substr(4));
          } else {
            s.Delta = item.value("Delta", 0.0);
          }
          c.fig3_series.push_back(s);
        }
      }
    } catch (const json::exception& e) {
      throw config_error(std::string("bad curves config: ") + e.what());
    }
    return c;
  }

  std::vector<CurvePoint> emit() const {
    switch (fig) {
      case 3: return emit_fig3(fig3_series, eps_grid);
      case 5: return emit_fig5(eps_list, m_grid, t);
      case 6: return emit_fig6(delta, Delta, n_grid, m_list, t);
      case 7: return emit_fig7(delta, Delta, m_grid, n_list, t);
      case 8: return emit_fig8(delta, Delta, n_grid, m_list, t, s_tilde);
      case 9: return emit_fig9(delta, Delta, m_grid, n_list, t, s_tilde);
      default: throw config_error("unknown figure id " + std::to_string(fig));
    }
  }
};

}  // namespace qrs
