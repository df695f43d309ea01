#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "nhssh/model.hpp"

namespace nhssh {

/// Lattice of l_cells unit cells with two sublattice sites each, filled with
/// n_fermions particles. Site (n, s), n = 1..L, s in {A, B} lives at flat
/// index 2(n-1) + s with A = 0, B = 1.
struct LatticeSpec {
  int l_cells;
  int n_fermions;

  LatticeSpec(int cells, int fermions) : l_cells(cells), n_fermions(fermions) {
    if (l_cells < 2) throw std::invalid_argument("LatticeSpec: need at least 2 unit cells");
    if (n_fermions < 1 || n_fermions > 2 * l_cells)
      throw std::invalid_argument("LatticeSpec: invalid filling, need 1 <= N <= 2L");
  }

  static LatticeSpec half_filled(int cells) { return LatticeSpec(cells, cells); }

  int sites() const { return 2 * l_cells; }
  static int flat_index(int cell, int sublattice) { return 2 * (cell - 1) + sublattice; }
};

/// 2L x N matrix with orthonormal columns: the single-particle orbitals of an
/// N-fermion Gaussian state. Orthonormality is checked at construction.
class IsometryFrame {
 public:
  explicit IsometryFrame(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() < m_.cols() || m_.cols() < 1)
      throw std::invalid_argument("IsometryFrame: need rows >= cols >= 1");
    const double dev =
        (m_.adjoint() * m_ - ComplexMatrix::Identity(m_.cols(), m_.cols())).cwiseAbs().maxCoeff();
    if (!(dev <= 1e-10))
      throw std::invalid_argument("IsometryFrame: columns not orthonormal (deviation " +
                                  std::to_string(dev) + ")");
  }

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index sites() const { return m_.rows(); }
  Eigen::Index fermions() const { return m_.cols(); }

 private:
  ComplexMatrix m_;
};

/// Hermitian single-particle correlator C with C_{ab} = <c^dag_a c_b>, a rank-N
/// projector for pure Gaussian states.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(ComplexMatrix c) : c_(std::move(c)) {
    if (c_.rows() != c_.cols() || c_.rows() < 2)
      throw std::invalid_argument("CorrelationMatrix: must be square, at least 2x2");
    const double dev = (c_ - c_.adjoint()).cwiseAbs().maxCoeff();
    if (!(dev <= 1e-10))
      throw std::invalid_argument("CorrelationMatrix: not hermitian (deviation " +
                                  std::to_string(dev) + ")");
  }

  const ComplexMatrix& matrix() const { return c_; }
  Eigen::Index sites() const { return c_.rows(); }

 private:
  ComplexMatrix c_;
};

/// Floquet operator over one driving period in the lattice basis under PBC,
/// U = e^{-i H2} e^{-i H1}.
///
/// e^{-i H1} is block diagonal over intracell pairs (A_n, B_n), each block the
/// two-level exponential of (j1, 0, i gamma). e^{-i H2} is block diagonal over
/// the shifted pairs (B_n, A_{n+1 mod L}); in that basis ordering the on-site
/// terms read diag(-i gamma, +i gamma), so the block generator is
/// (j2, 0, -i gamma). Both assemblies are exact, no dense exponential is
/// taken.
inline ComplexMatrix real_space_floquet(const ModelParams& p, const LatticeSpec& lattice) {
  const int n = lattice.sites();
  const Matrix2c block1 = exp_two_level(h1_vector(p));
  const Matrix2c block2 =
      exp_two_level(Vector3c(Complex(p.j2, 0), Complex(0, 0), Complex(0, -p.gamma)));

  ComplexMatrix u1 = ComplexMatrix::Zero(n, n);
  ComplexMatrix u2 = ComplexMatrix::Zero(n, n);
  for (int cell = 0; cell < lattice.l_cells; ++cell) {
    const int a = 2 * cell;      // A_n
    const int b = 2 * cell + 1;  // B_n
    u1.block<2, 2>(a, a) = block1;

    const int a_next = (2 * cell + 2) % n;  // A_{n+1 mod L}
    u2(b, b) = block2(0, 0);
    u2(b, a_next) = block2(0, 1);
    u2(a_next, b) = block2(1, 0);
    u2(a_next, a_next) = block2(1, 1);
  }
  return u2 * u1;
}

/// Initial frame for the charge-density-wave state occupying every B site:
/// column j' has its single 1 at the B site of cell j'+1. Fillings other than
/// N = L occupy the first N B sites, then continue on A sites.
inline IsometryFrame initial_isometry(const LatticeSpec& lattice) {
  const int n = lattice.sites();
  ComplexMatrix u = ComplexMatrix::Zero(n, lattice.n_fermions);
  for (int j = 0; j < lattice.n_fermions; ++j) {
    const int row = (j < lattice.l_cells) ? 2 * j + 1 : 2 * (j - lattice.l_cells);
    u(row, j) = 1.0;
  }
  return IsometryFrame(std::move(u));
}

/// One stroboscopic step: multiply the frame by the period operator and
/// restore orthonormality through QR; the new frame is the Q factor. This
/// renormalizes the non-unitary evolution while preserving the column space,
/// which fixes the physical state.
inline IsometryFrame evolve_one_period(const ComplexMatrix& u, const IsometryFrame& frame) {
  if (u.rows() != u.cols() || u.rows() != frame.sites())
    throw std::invalid_argument("evolve_one_period: dimension mismatch");
  QrFactors qr = qr_decompose(u * frame.matrix());
  return IsometryFrame(std::move(qr.q));
}

/// Single-particle correlator of a frame: C_{ms,ns'} = [U U^dag]_{ns',ms},
/// i.e. the transpose of the column-space projector.
inline CorrelationMatrix correlation(const IsometryFrame& frame) {
  const ComplexMatrix gram = frame.matrix() * frame.matrix().adjoint();
  return CorrelationMatrix(gram.transpose());
}

/// Drives the frame through n_periods stroboscopic steps and calls
/// visit(period, frame) at period 0 (initial state) and after every step.
template <typename Visitor>
void stroboscopic_scan(const ModelParams& params, const LatticeSpec& lattice, long n_periods,
                       Visitor&& visit) {
  if (n_periods < 1) throw std::invalid_argument("stroboscopic_scan: n_periods must be >= 1");
  const ComplexMatrix u = real_space_floquet(params, lattice);
  IsometryFrame frame = initial_isometry(lattice);
  visit(long(0), std::as_const(frame));
  for (long period = 1; period <= n_periods; ++period) {
    frame = evolve_one_period(u, frame);
    visit(period, std::as_const(frame));
  }
}

struct CorrelationSnapshot {
  long period;
  CorrelationMatrix corr;
};

/// Runs the stroboscopic evolution and returns correlation snapshots at the
/// requested periods (ascending, duplicates merged). Period 0 refers to the
/// initial state.
inline std::vector<CorrelationSnapshot> stroboscopic_run(const ModelParams& params,
                                                         const LatticeSpec& lattice,
                                                         long n_periods,
                                                         std::span<const long> observers) {
  if (n_periods < 1) throw std::invalid_argument("stroboscopic_run: n_periods must be >= 1");
  std::vector<long> wanted(observers.begin(), observers.end());
  for (long o : wanted)
    if (o < 0 || o > n_periods)
      throw std::invalid_argument("stroboscopic_run: observer period " + std::to_string(o) +
                                  " outside [0, n_periods]");
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  std::vector<CorrelationSnapshot> out;
  out.reserve(wanted.size());
  if (wanted.empty()) return out;

  const ComplexMatrix u = real_space_floquet(params, lattice);
  IsometryFrame frame = initial_isometry(lattice);
  std::size_t next = 0;
  if (wanted[next] == 0) {
    out.push_back({0, correlation(frame)});
    ++next;
  }
  for (long period = 1; period <= n_periods && next < wanted.size(); ++period) {
    frame = evolve_one_period(u, frame);
    if (period == wanted[next]) {
      out.push_back({period, correlation(frame)});
      ++next;
    }
  }
  return out;
}

}  // namespace nhssh
