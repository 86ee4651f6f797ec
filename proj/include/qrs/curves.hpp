// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "qrs/bounds.hpp"
#include "qrs/verify.hpp"

namespace qrs {

// One row of an emitted curve. y is either a finite value or a sentinel:
// "unbounded" for a bound that does not exist, "skipped" for a grid point
// outside a formula's domain (emitted as a visible warning row rather than
// silently dropped).
struct CurvePoint {
  enum class Tag { value, unbounded, skipped };
  double x = 0.0;
  std::string series;
  Tag tag = Tag::value;
  double y = 0.0;

  static CurvePoint of(double x, std::string series, double y) {
    return CurvePoint{x, std::move(series), Tag::value, y};
  }
  static CurvePoint sentinel(double x, std::string series, Tag tag) {
    return CurvePoint{x, std::move(series), tag, 0.0};
  }
  static CurvePoint of(double x, std::string series, const bounds::BoundValue& b) {
    if (b.is_unbounded()) return sentinel(x, std::move(series), Tag::unbounded);
    return of(x, std::move(series), b.value());
  }
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Series labels want readability, not round-tripping.
inline std::string fmt_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline void check_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw config_error(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw config_error(std::string(what) + " grid must be strictly increasing");
}

}  // namespace detail

// Stable CSV: header x,series,y; rows sorted by (series, x); reals at 17
// significant digits (round-trip exact); LF line endings.
inline void write_csv(std::ostream& out, std::vector<CurvePoint> points) {
  std::stable_sort(points.begin(), points.end(), [](const CurvePoint& a, const CurvePoint& b) {
    if (a.series != b.series) return a.series < b.series;
    return a.x < b.x;
  });
  out << "x,series,y\n";
  for (const auto& p : points) {
    out << detail::fmt17(p.x) << ',' << p.series << ',';
    switch (p.tag) {
      case CurvePoint::Tag::value: out << detail::fmt17(p.y); break;
      case CurvePoint::Tag::unbounded: out << "unbounded"; break;
      case CurvePoint::Tag::skipped: out << "skipped"; break;
    }
    out << '\n';
  }
}

// Required total qubit count N = 8k against the infidelity budget epsilon.
// A series fixes delta and either an absolute Delta or Delta = fraction*eps.
struct Fig3Series {
  double delta = 1e-3;
  bool Delta_is_fraction = false;
  double Delta = 0.0;  // absolute value, or fraction of eps

  std::string label() const {
    std::string l = "delta=" + detail::fmt_label(delta) + " Delta=";
    if (Delta_is_fraction) return l + "eps*" + detail::fmt_label(Delta);
    return l + detail::fmt_label(Delta);
  }
};

inline std::vector<Fig3Series> fig3_default_series() {
  return {Fig3Series{1e-3, false, 0.0}, Fig3Series{1e-5, false, 0.0},
          Fig3Series{1e-3, true, 0.1}};
}

inline std::vector<CurvePoint> emit_fig3(const std::vector<Fig3Series>& series,
                                         const std::vector<double>& eps_grid) {
  detail::check_grid(eps_grid, "epsilon");
  if (series.empty()) throw config_error("fig3 needs at least one series");
  std::vector<CurvePoint> out;
  for (const auto& s : series) {
    for (double eps : eps_grid) {
      const double Delta = s.Delta_is_fraction ? s.Delta * eps : s.Delta;
      if (!(Delta < eps / 3.0)) {
        out.push_back(CurvePoint::sentinel(eps, s.label(), CurvePoint::Tag::skipped));
        continue;
      }
      const double n = 8.0 * static_cast<double>(required_k(eps, s.delta, Delta));
      out.push_back(CurvePoint::of(eps, s.label(), n));
    }
  }
  return out;
}

// Client uncertainty ceiling against M, one series per epsilon
// (epsilon = 0 is the ideal shot-noise reference line).
inline std::vector<CurvePoint> emit_fig5(const std::vector<double>& eps_list,
                                         const std::vector<double>& m_grid, double t) {
  detail::check_grid(m_grid, "M");
  if (eps_list.empty()) throw config_error("fig5 needs at least one epsilon");
  std::vector<CurvePoint> out;
  for (double eps : eps_list) {
    const std::string label = "eps=" + detail::fmt_label(eps);
    for (double m : m_grid) {
      if (!(m >= 1.0)) throw config_error("fig5 M grid must be >= 1");
      out.push_back(CurvePoint::of(
          m, label, bounds::client_upper(eps, static_cast<std::uint64_t>(m), t)));
    }
  }
  return out;
}

namespace detail {

// Shared shape of the four ratio figures: sweep one of (N, M), fix the
// other, map N -> eps through the resource formula, emit the ratio.
// hoeffding < 0 disables the tail-bound variant (figs 6/7); otherwise it is
// the s~ to use (figs 8/9).
inline std::vector<CurvePoint> emit_ratio_curve(double delta, double Delta,
                                                const std::vector<double>& sweep,
                                                bool sweep_is_n,
                                                const std::vector<double>& fixed_list,
                                                double t, double hoeffding_s) {
  check_grid(sweep, sweep_is_n ? "N" : "M");
  if (fixed_list.empty()) throw config_error("ratio figure needs at least one fixed series");
  std::vector<CurvePoint> out;
  for (double fixed : fixed_list) {
    const std::string label =
        (sweep_is_n ? "M=" : "N=") + fmt_label(fixed);
    for (double x : sweep) {
      const double n_total = sweep_is_n ? x : fixed;
      const double m_real = sweep_is_n ? fixed : x;
      if (!(n_total >= 8.0)) throw config_error("N grid must be >= 8");
      if (!(m_real >= 1.0)) throw config_error("M grid must be >= 1");
      const auto m = static_cast<std::uint64_t>(m_real);
      // N = 8k total qubits: eps = 3 Delta + sqrt(75 ln(2/delta) / N).
      const double eps = 3.0 * Delta + std::sqrt(75.0 * std::log(2.0 / delta) / n_total);
      if (!bounds::epsilon_in_bound_domain(eps)) {
        out.push_back(CurvePoint::sentinel(x, label, CurvePoint::Tag::skipped));
        continue;
      }
      const bounds::BoundValue ratio =
          hoeffding_s < 0.0 ? bounds::asymmetry_ratio(eps, m, t)
                            : bounds::hoeffding_asymmetry_ratio(eps, m, t, hoeffding_s);
      out.push_back(CurvePoint::of(x, label, ratio));
    }
  }
  return out;
}

}  // namespace detail

// Provable client/server asymmetry against total qubit count N, one series
// per repetition count M.
inline std::vector<CurvePoint> emit_fig6(double delta, double Delta,
                                         const std::vector<double>& n_grid,
                                         const std::vector<double>& m_list, double t) {
  return detail::emit_ratio_curve(delta, Delta, n_grid, true, m_list, t, -1.0);
}

// Asymmetry against M, one series per N.
inline std::vector<CurvePoint> emit_fig7(double delta, double Delta,
                                         const std::vector<double>& m_grid,
                                         const std::vector<double>& n_list, double t) {
  return detail::emit_ratio_curve(delta, Delta, m_grid, false, n_list, t, -1.0);
}

// Tail-bound (finite-confidence) variants of figs 6 and 7.
inline std::vector<CurvePoint> emit_fig8(double delta, double Delta,
                                         const std::vector<double>& n_grid,
                                         const std::vector<double>& m_list, double t,
                                         double s_tilde) {
  return detail::emit_ratio_curve(delta, Delta, n_grid, true, m_list, t, s_tilde);
}

inline std::vector<CurvePoint> emit_fig9(double delta, double Delta,
                                         const std::vector<double>& m_grid,
                                         const std::vector<double>& n_list, double t,
                                         double s_tilde) {
  return detail::emit_ratio_curve(delta, Delta, m_grid, false, n_list, t, s_tilde);
}

}  // namespace qrs
