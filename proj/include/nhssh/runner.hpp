#pragma once

#include <fstream>
#include <iostream>
#include <sstream>

#include "nhssh/config.hpp"

namespace nhssh {
namespace detail {

inline ModelParams params_of(const RunConfig& cfg) {
  return ModelParams(cfg.j1, cfg.j2, cfg.gamma);
}

inline void run_spectrum(const RunConfig& cfg, std::ostream& out) {
  const ModelParams p = params_of(cfg);
  csv_row(out, {"k", "reE_plus", "imE_plus", "reE_minus", "imE_minus", "cosE"});
  // Midpoint sampling like the R integral, but without its 64-node floor.
  for (int m = 0; m < cfg.k_points; ++m) {
    const double k = -kPi + (m + 0.5) * (2.0 * kPi / cfg.k_points);
    const QuasienergyPair qe = quasienergy(p, Quasimomentum(k));
    csv_row(out, {format_double(k), format_double(qe.e_plus.real()),
                  format_double(qe.e_plus.imag()), format_double(qe.e_minus.real()),
                  format_double(qe.e_minus.imag()), format_double(qe.cos_e)});
  }
}

inline void run_ratio(const RunConfig& cfg, std::ostream& out) {
  const ModelParams p = params_of(cfg);
  const PtDiagnostics d = classify_pt(p, KGrid(cfg.k_points));
  csv_row(out, {"j1", "j2", "gamma", "R", "gap", "phase"});
  csv_row(out, {format_double(cfg.j1), format_double(cfg.j2), format_double(cfg.gamma),
                format_double(d.r_ratio), format_double(d.dissipation_gap),
                to_string(d.phase)});
}

inline void run_pt_diagram(const RunConfig& cfg, std::ostream& out) {
  const auto rows = sweep_pt_diagram(*cfg.axis1, *cfg.axis2, params_of(cfg),
                                     KGrid(cfg.k_points), cfg.workers);
  csv_row(out, {cfg.axis1->name, cfg.axis2->name, "R", "gap", "phase"});
  for (const auto& r : rows)
    csv_row(out, {format_double(r.value1), format_double(r.value2), format_double(r.r_ratio),
                  format_double(r.dissipation_gap), to_string(r.phase)});
}

inline void run_evolve(const RunConfig& cfg, std::ostream& out) {
  const ModelParams p = params_of(cfg);
  const LatticeSpec lattice = LatticeSpec::half_filled(cfg.cells);
  const SubsystemSpec sub{1, cfg.subsystem > 0 ? cfg.subsystem : cfg.cells / 2};
  csv_row(out, {"period", "S"});
  stroboscopic_scan(p, lattice, cfg.periods, [&](long period, const IsometryFrame& frame) {
    const double s = entanglement_entropy(correlation(frame), sub);
    csv_row(out, {format_int(period), format_double(s)});
  });
}

inline void run_ee_scaling(const RunConfig& cfg, std::ostream& out) {
  const auto points = ee_vs_system_size(params_of(cfg), cfg.sizes, cfg.periods,
                                        cfg.window_start, cfg.window_end, cfg.workers);
  const ScalingFit fit = fit_volume_law(points);
  const EntanglementLaw law = classify_entanglement(fit);
  csv_row(out, {"L", "S_mean", "S_std"});
  for (const auto& pt : points)
    csv_row(out, {format_int(pt.l_cells), format_double(pt.s_mean), format_double(pt.s_std)});
  csv_row(out, {"g", "s0", "g_stderr", "label"});
  csv_row(out, {format_double(fit.g), format_double(fit.s0), format_double(fit.g_stderr),
                to_string(law)});
}

inline void run_ee_profile(const RunConfig& cfg, std::ostream& out) {
  const auto points = ee_vs_subsystem(params_of(cfg), cfg.cells, cfg.periods, cfg.window_start,
                                      cfg.window_end, cfg.workers);
  const ProfileFit fit = fit_subsystem_profile(points, cfg.cells);
  csv_row(out, {"l", "S_mean"});
  for (const auto& pt : points)
    csv_row(out, {format_int(pt.length_cells), format_double(pt.s_mean)});
  csv_row(out, {"g0", "g1", "g2", "rss"});
  csv_row(out, {format_double(fit.g0), format_double(fit.g1), format_double(fit.g2),
                format_double(fit.rss)});
}

inline void run_ee_diagram(const RunConfig& cfg, std::ostream& out) {
  const auto rows = sweep_entanglement_diagram(*cfg.axis1, *cfg.axis2, params_of(cfg), cfg.sizes,
                                               cfg.periods, cfg.window_start, cfg.window_end,
                                               cfg.workers);
  csv_row(out, {cfg.axis1->name, cfg.axis2->name, "g", "label"});
  for (const auto& r : rows)
    csv_row(out, {format_double(r.value1), format_double(r.value2), format_double(r.g),
                  r.failed ? "FAILED" : to_string(r.law)});
}

}  // namespace detail

/// Executes one resolved configuration. The full CSV (provenance header plus
/// body) is assembled in memory first, so failed runs never leave partial
/// output files behind.
inline void run(const RunConfig& cfg) {
  std::ostringstream body;
  body.precision(17);
  switch (cfg.command) {
    case Command::Spectrum: detail::run_spectrum(cfg, body); break;
    case Command::Ratio: detail::run_ratio(cfg, body); break;
    case Command::PtDiagram: detail::run_pt_diagram(cfg, body); break;
    case Command::Evolve: detail::run_evolve(cfg, body); break;
    case Command::EeScaling: detail::run_ee_scaling(cfg, body); break;
    case Command::EeProfile: detail::run_ee_profile(cfg, body); break;
    case Command::EeDiagram: detail::run_ee_diagram(cfg, body); break;
  }

  if (cfg.output.empty()) {
    csv_provenance(std::cout, cfg.to_key_values());
    std::cout << body.str();
    std::cout.flush();
    return;
  }
  std::ofstream file(cfg.output);
  if (!file) throw IoError("cannot open output file '" + cfg.output + "'");
  csv_provenance(file, cfg.to_key_values());
  file << body.str();
  file.flush();
  if (!file) throw IoError("failed writing output file '" + cfg.output + "'");
}

}  // namespace nhssh
