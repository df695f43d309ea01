#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nhssh/lattice.hpp"
#include "nhssh/parallel.hpp"
#include "nhssh/spectral.hpp"

namespace nhssh {

/// Contiguous block of length_cells unit cells starting at start_cell
/// (1-based); no wrapping across the boundary.
struct SubsystemSpec {
  int start_cell = 1;
  int length_cells = 1;
};

/// Bipartite entanglement entropy (natural log) of the subsystem from the
/// spectrum {zeta_j} of the restricted correlation block:
///   S = -sum_j [zeta ln zeta + (1 - zeta) ln(1 - zeta)].
/// Eigenvalues are clipped into [1e-12, 1 - 1e-12] so that 0 ln 0 evaluates
/// to 0, but values outside [-1e-8, 1 + 1e-8] raise SpectrumRangeError: they
/// mean an upstream invariant broke and must not be masked.
inline double entanglement_entropy(const CorrelationMatrix& corr, const SubsystemSpec& sub) {
  const int total_cells = int(corr.sites()) / 2;
  if (sub.start_cell < 1 || sub.length_cells < 1 || sub.length_cells > total_cells - 1 ||
      sub.start_cell - 1 + sub.length_cells > total_cells)
    throw std::invalid_argument("entanglement_entropy: subsystem out of bounds");
  const int offset = 2 * (sub.start_cell - 1);
  const int width = 2 * sub.length_cells;
  const ComplexMatrix block = corr.matrix().block(offset, offset, width, width);
  const HermitianSpectrum spectrum = hermitian_eigs(block, 1e-8);

  double s = 0.0;
  for (Eigen::Index j = 0; j < spectrum.eigenvalues.size(); ++j) {
    const double zeta = spectrum.eigenvalues(j);
    if (zeta < -1e-8 || zeta > 1.0 + 1e-8)
      throw SpectrumRangeError("entanglement_entropy: correlation eigenvalue " +
                               std::to_string(zeta) + " outside [0, 1]");
    const double z = std::clamp(zeta, 1e-12, 1.0 - 1e-12);
    s -= z * std::log(z) + (1.0 - z) * std::log(1.0 - z);
  }
  return s;
}

/// Stroboscopic entanglement entropy samples S(period).
struct EntanglementTrace {
  std::vector<long> periods;
  std::vector<double> values;
};

struct WindowStats {
  double mean;
  double std;  // sample standard deviation
};

/// Mean and sample standard deviation of the trace over the inclusive period
/// window [window_start, window_end].
inline WindowStats steady_state_ee(const EntanglementTrace& trace, long window_start,
                                   long window_end) {
  if (trace.periods.size() != trace.values.size())
    throw std::invalid_argument("steady_state_ee: malformed trace");
  if (window_start >= window_end)
    throw std::out_of_range("steady_state_ee: need window_start < window_end");

  bool saw_start = false, saw_end = false;
  std::vector<double> window;
  window.reserve(trace.values.size());
  for (std::size_t i = 0; i < trace.periods.size(); ++i) {
    const long p = trace.periods[i];
    if (p == window_start) saw_start = true;
    if (p == window_end) saw_end = true;
    if (p >= window_start && p <= window_end) window.push_back(trace.values[i]);
  }
  if (!saw_start || !saw_end)
    throw std::out_of_range("steady_state_ee: window endpoints not present in trace");

  double mean = 0.0;
  for (double v : window) mean += v;
  mean /= double(window.size());
  double ss = 0.0;
  for (double v : window) ss += (v - mean) * (v - mean);
  const double std_dev = window.size() > 1 ? std::sqrt(ss / double(window.size() - 1)) : 0.0;
  return {mean, std_dev};
}

struct SizeScalingPoint {
  int l_cells;
  double s_mean;
  double s_std;
};

namespace detail {

/// Steady-state EE of the equal bipartition l = L/2 at half filling: one
/// evolution, EE per snapshot inside the window, then the window average.
inline SizeScalingPoint equal_bipartition_point(const ModelParams& params, int l_cells,
                                                long periods, long window_start,
                                                long window_end) {
  const LatticeSpec lattice = LatticeSpec::half_filled(l_cells);
  const SubsystemSpec half{1, l_cells / 2};
  EntanglementTrace trace;
  stroboscopic_scan(params, lattice, periods, [&](long period, const IsometryFrame& frame) {
    if (period < window_start || period > window_end) return;
    trace.periods.push_back(period);
    trace.values.push_back(entanglement_entropy(correlation(frame), half));
  });
  const WindowStats stats = steady_state_ee(trace, window_start, window_end);
  return {l_cells, stats.mean, stats.std};
}

}  // namespace detail

/// Steady-state EE of the equal bipartition versus system size; each size is
/// an independent evolution, dispatched on the worker pool.
inline std::vector<SizeScalingPoint> ee_vs_system_size(const ModelParams& params,
                                                       const std::vector<int>& sizes,
                                                       long periods, long window_start,
                                                       long window_end,
                                                       unsigned workers = default_workers()) {
  if (sizes.empty()) throw std::invalid_argument("ee_vs_system_size: empty size list");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 2 || sizes[i] % 2 != 0)
      throw std::invalid_argument("ee_vs_system_size: sizes must be even and >= 2");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("ee_vs_system_size: sizes must be strictly ascending");
  }
  if (window_start < 0 || window_start >= window_end || window_end > periods)
    throw std::out_of_range("ee_vs_system_size: window outside [0, periods]");

  std::vector<SizeScalingPoint> points(sizes.size());
  parallel_for(sizes.size(), workers, [&](std::size_t i) {
    points[i] =
        detail::equal_bipartition_point(params, sizes[i], periods, window_start, window_end);
  });
  return points;
}

struct SubsystemPoint {
  int length_cells;
  double s_mean;
};

/// Steady-state EE versus subsystem size l = 1..L-1 at fixed L and half
/// filling: one evolution; every snapshot in the window contributes the full
/// profile from the same correlation matrix.
inline std::vector<SubsystemPoint> ee_vs_subsystem(const ModelParams& params, int l_cells,
                                                   long periods, long window_start,
                                                   long window_end,
                                                   unsigned workers = default_workers()) {
  if (l_cells < 2 || l_cells % 2 != 0)
    throw std::invalid_argument("ee_vs_subsystem: L must be even and >= 2");
  if (window_start < 0 || window_start >= window_end || window_end > periods)
    throw std::out_of_range("ee_vs_subsystem: window outside [0, periods]");

  const LatticeSpec lattice = LatticeSpec::half_filled(l_cells);
  std::vector<double> sums(l_cells - 1, 0.0);
  long n_snapshots = 0;
  stroboscopic_scan(params, lattice, periods, [&](long period, const IsometryFrame& frame) {
    if (period < window_start || period > window_end) return;
    const CorrelationMatrix corr = correlation(frame);
    std::vector<double> profile(l_cells - 1);
    parallel_for(profile.size(), workers, [&](std::size_t i) {
      profile[i] = entanglement_entropy(corr, SubsystemSpec{1, int(i) + 1});
    });
    for (std::size_t i = 0; i < profile.size(); ++i) sums[i] += profile[i];
    ++n_snapshots;
  });

  std::vector<SubsystemPoint> points(l_cells - 1);
  for (int l = 1; l < l_cells; ++l)
    points[l - 1] = {l, sums[l - 1] / double(n_snapshots)};
  return points;
}

/// Linear fit S(L) = g L + s0.
struct ScalingFit {
  double g;
  double s0;
  double g_stderr;
  double rss;
};

inline ScalingFit fit_volume_law(const std::vector<SizeScalingPoint>& points) {
  std::vector<int> distinct;
  for (const auto& p : points) distinct.push_back(p.l_cells);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3)
    throw FitDegenerateError("fit_volume_law: need at least 3 distinct sizes");

  Eigen::MatrixXd design(points.size(), 2);
  Eigen::VectorXd targets(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    design(i, 0) = points[i].l_cells;
    design(i, 1) = 1.0;
    targets(i) = points[i].s_mean;
  }
  const LeastSquaresFit fit = linear_least_squares(design, targets);
  return {fit.coefficients(0), fit.coefficients(1), fit.standard_errors(0),
          fit.residual_sum_of_squares};
}

/// Fit of the subsystem profile to g0 sin(pi l/L) + g1 ln[sin(pi l/L)] + g2.
struct ProfileFit {
  double g0;
  double g1;
  double g2;
  double rss;
};

/// Only interior points 2 <= l <= L-2 enter the fit; ln sin diverges at the
/// edges.
inline ProfileFit fit_subsystem_profile(const std::vector<SubsystemPoint>& points, int l_cells) {
  std::vector<const SubsystemPoint*> interior;
  for (const auto& p : points)
    if (p.length_cells >= 2 && p.length_cells <= l_cells - 2) interior.push_back(&p);
  if (interior.size() < 4)
    throw FitDegenerateError("fit_subsystem_profile: need at least 4 interior points");

  Eigen::MatrixXd design(interior.size(), 3);
  Eigen::VectorXd targets(interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const double chord = std::sin(kPi * interior[i]->length_cells / double(l_cells));
    design(i, 0) = chord;
    design(i, 1) = std::log(chord);
    design(i, 2) = 1.0;
    targets(i) = interior[i]->s_mean;
  }
  const LeastSquaresFit fit = linear_least_squares(design, targets);
  return {fit.coefficients(0), fit.coefficients(1), fit.coefficients(2),
          fit.residual_sum_of_squares};
}

enum class EntanglementLaw { AreaLaw, VolumeLaw };

inline const char* to_string(EntanglementLaw law) {
  return law == EntanglementLaw::AreaLaw ? "AREA_LAW" : "VOLUME_LAW";
}

/// Area law iff the fitted gradient is indistinguishable from zero: below the
/// floor 0.001 nats/cell or below three standard errors. Area-law points sit
/// at g ~ 1e-15 while the shallowest volume-law pocket (the reentrant region
/// near gamma = 1.3pi at J1 = 2.2pi, J2 = 2pi/3) fits to g ~ 3e-3, so the
/// floor separates the regimes by three orders of magnitude on each side.
inline EntanglementLaw classify_entanglement(const ScalingFit& fit) {
  if (!std::isfinite(fit.g)) throw std::invalid_argument("classify_entanglement: invalid fit");
  const double threshold = std::max(0.001, 3.0 * fit.g_stderr);
  return fit.g < threshold ? EntanglementLaw::AreaLaw : EntanglementLaw::VolumeLaw;
}

struct EeSweepRow {
  double value1;
  double value2;
  double g;  // NaN when the cell failed
  EntanglementLaw law;
  bool failed;
};

/// Entanglement phase diagram: per cell, EE-vs-size scaling, linear fit and
/// label. Cells that raise a numerical error are kept in the table with a
/// failure marker instead of being dropped.
inline std::vector<EeSweepRow> sweep_entanglement_diagram(
    const AxisSpec& axis1, const AxisSpec& axis2, const ModelParams& fixed,
    const std::vector<int>& sizes, long periods, long window_start, long window_end,
    unsigned workers = default_workers()) {
  validate_axes(axis1, axis2);
  const std::size_t n_cells = std::size_t(axis1.steps) * std::size_t(axis2.steps);
  std::vector<EeSweepRow> rows(n_cells);
  parallel_for(n_cells, workers, [&](std::size_t cell) {
    const int i1 = int(cell) / axis2.steps;
    const int i2 = int(cell) % axis2.steps;
    const double v1 = axis1.value(i1);
    const double v2 = axis2.value(i2);
    EeSweepRow row{v1, v2, std::numeric_limits<double>::quiet_NaN(), EntanglementLaw::AreaLaw,
                   true};
    try {
      const ModelParams p =
          with_axis_value(with_axis_value(fixed, axis1.name, v1), axis2.name, v2);
      const auto points = ee_vs_system_size(p, sizes, periods, window_start, window_end, 1);
      const ScalingFit fit = fit_volume_law(points);
      row.g = fit.g;
      row.law = classify_entanglement(fit);
      row.failed = false;
    } catch (const ConfigError&) {
      throw;  // bad axis configuration is not a per-cell failure
    } catch (const std::exception&) {
      // leave the failure marker in place
    }
    rows[cell] = row;
  });
  return rows;
}

}  // namespace nhssh
