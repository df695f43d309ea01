#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "nhssh/model.hpp"
#include "nhssh/parallel.hpp"

namespace nhssh {

/// Midpoint-offset quasimomentum grid k_m = -pi + (m + 1/2) 2pi/n. For even n
/// no node hits the high-symmetry points k = 0, +-pi, so band touchings never
/// land exactly on a sample.
struct KGrid {
  int n_points;

  explicit KGrid(int n = 4096) : n_points(n) {
    if (n < 64) throw std::invalid_argument("KGrid: n_points must be >= 64");
  }

  double node(int m) const { return -kPi + (m + 0.5) * (2.0 * kPi / n_points); }
};

enum class PtPhase { Invariant, Broken, Mixed };

inline const char* to_string(PtPhase p) {
  switch (p) {
    case PtPhase::Invariant: return "PT_INVARIANT";
    case PtPhase::Broken: return "PT_BROKEN";
    default: return "PT_MIXED";
  }
}

struct PtDiagnostics {
  double r_ratio;          // fraction of the Brillouin zone with real quasienergy
  double dissipation_gap;  // min over k of |Im E(k)|
  PtPhase phase;
};

/// Band-touching indicators: delta0 = cos E - 1 vanishes when the bands touch
/// at E = 0, delta_pi = cos E + 1 when they touch at E = pi.
inline std::pair<double, double> gap_functions(const ModelParams& p, Quasimomentum k) {
  const double ce = quasienergy(p, k).cos_e;
  return {ce - 1.0, ce + 1.0};
}

/// Fraction of the quasimomentum grid where the quasienergy is real, i.e.
/// |cos E| < 1. Nodes inside the +-reality_tol band around |cos E| = 1 count
/// half: the boundary has measure zero, and the half-weight keeps grid
/// refinement monotone.
inline double real_ratio(const ModelParams& p, const KGrid& grid, double reality_tol = 1e-9) {
  double acc = 0.0;
  for (int m = 0; m < grid.n_points; ++m) {
    const double a = std::abs(quasienergy(p, Quasimomentum(grid.node(m))).cos_e);
    if (a < 1.0 - reality_tol)
      acc += 1.0;
    else if (a <= 1.0 + reality_tol)
      acc += 0.5;
  }
  return acc / grid.n_points;
}

/// Minimum of |Im E(k)| over the grid. Strictly positive exactly when the
/// whole Floquet spectrum is complex (R = 0).
inline double dissipation_gap(const ModelParams& p, const KGrid& grid) {
  double gap = std::numeric_limits<double>::infinity();
  for (int m = 0; m < grid.n_points; ++m) {
    const auto qe = quasienergy(p, Quasimomentum(grid.node(m)));
    gap = std::min(gap, std::abs(qe.e_plus.imag()));
  }
  return gap;
}

/// R = 1 and R = 0 are detected up to one misclassified grid node, so the
/// phase label cannot flip on a single boundary sample.
inline PtDiagnostics classify_pt(const ModelParams& p, const KGrid& grid,
                                 double reality_tol = 1e-9) {
  PtDiagnostics d{};
  d.r_ratio = real_ratio(p, grid, reality_tol);
  d.dissipation_gap = dissipation_gap(p, grid);
  const double threshold = 1.0 / grid.n_points;
  if (d.r_ratio >= 1.0 - threshold)
    d.phase = PtPhase::Invariant;
  else if (d.r_ratio <= threshold)
    d.phase = PtPhase::Broken;
  else
    d.phase = PtPhase::Mixed;
  return d;
}

/// One sweep axis: a model parameter name ("j1", "j2" or "gamma") and an
/// inclusive linear range.
struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int steps = 0;

  double value(int i) const { return min + (max - min) * double(i) / double(steps - 1); }
};

inline bool is_axis_name(const std::string& name) {
  return name == "j1" || name == "j2" || name == "gamma";
}

inline void validate_axes(const AxisSpec& a1, const AxisSpec& a2) {
  for (const AxisSpec* a : {&a1, &a2}) {
    if (!is_axis_name(a->name))
      throw ConfigError("sweep axis: unknown parameter '" + a->name +
                        "' (expected j1, j2 or gamma)");
    if (a->steps < 2) throw ConfigError("sweep axis '" + a->name + "': steps must be >= 2");
    if (!std::isfinite(a->min) || !std::isfinite(a->max))
      throw ConfigError("sweep axis '" + a->name + "': non-finite range");
  }
  if (a1.name == a2.name) throw ConfigError("sweep axes must name distinct parameters");
}

/// Applies one axis value to a parameter set. Negative gamma axis values are
/// folded to |gamma|: flipping the sign of gamma only relabels the
/// sublattices, so diagrams over gamma < 0 mirror the gamma > 0 half plane.
inline ModelParams with_axis_value(const ModelParams& base, const std::string& name, double v) {
  double j1 = base.j1, j2 = base.j2, gamma = base.gamma;
  if (name == "j1")
    j1 = v;
  else if (name == "j2")
    j2 = v;
  else if (name == "gamma")
    gamma = std::abs(v);
  else
    throw ConfigError("sweep axis: unknown parameter '" + name + "'");
  return ModelParams(j1, j2, gamma);
}

struct PtSweepRow {
  double value1;
  double value2;
  double r_ratio;
  double dissipation_gap;
  PtPhase phase;
};

/// PT diagnostics over the Cartesian product of two axes, row major with
/// axis1 outermost. Cells are independent and run on a bounded worker pool;
/// results are assembled by cell index, so the output ordering does not
/// depend on scheduling.
inline std::vector<PtSweepRow> sweep_pt_diagram(const AxisSpec& axis1, const AxisSpec& axis2,
                                                const ModelParams& fixed, const KGrid& grid,
                                                unsigned workers = default_workers()) {
  validate_axes(axis1, axis2);
  const std::size_t n_cells = std::size_t(axis1.steps) * std::size_t(axis2.steps);
  std::vector<PtSweepRow> rows(n_cells);
  parallel_for(n_cells, workers, [&](std::size_t cell) {
    const int i1 = int(cell) / axis2.steps;
    const int i2 = int(cell) % axis2.steps;
    const double v1 = axis1.value(i1);
    const double v2 = axis2.value(i2);
    const ModelParams p = with_axis_value(with_axis_value(fixed, axis1.name, v1), axis2.name, v2);
    const PtDiagnostics d = classify_pt(p, grid);
    rows[cell] = {v1, v2, d.r_ratio, d.dissipation_gap, d.phase};
  });
  return rows;
}

}  // namespace nhssh
