#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>

#include "nhssh/errors.hpp"

namespace nhssh {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Matrix2c = Eigen::Matrix2cd;
using Vector3c = Eigen::Vector3cd;

inline Matrix2c pauli_x() {
  Matrix2c m;
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix2c pauli_y() {
  Matrix2c m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Matrix2c pauli_z() {
  Matrix2c m;
  m << 1, 0, 0, -1;
  return m;
}

/// d.sigma for a complex 3-vector d.
inline Matrix2c pauli_dot(const Vector3c& d) {
  Matrix2c m;
  m << d(2), d(0) - Complex(0, 1) * d(1),  //
      d(0) + Complex(0, 1) * d(1), -d(2);
  return m;
}

/// Exact two-level exponential e^{-i d.sigma}.
///
/// Uses cos(E) I - i (sin(E)/E) d.sigma with E = sqrt(d.d) (principal branch,
/// unconjugated dot product). Below |E| = 1e-8 the sin(E)/E ratio loses
/// relative accuracy, so the second-order series I - i d.sigma - (d.sigma)^2/2
/// is returned instead; this also covers exceptional points where d.d = 0 with
/// d != 0 and the generator is nilpotent.
inline Matrix2c exp_two_level(const Vector3c& d) {
  if (!d.allFinite()) throw std::invalid_argument("exp_two_level: non-finite generator");
  const Complex e2 = d(0) * d(0) + d(1) * d(1) + d(2) * d(2);
  const Complex e = std::sqrt(e2);
  const Matrix2c ds = pauli_dot(d);
  const Complex i1(0, 1);
  if (std::abs(e) < 1e-8) {
    return Matrix2c::Identity() - i1 * ds - 0.5 * (ds * ds);
  }
  return std::cos(e) * Matrix2c::Identity() - i1 * (std::sin(e) / e) * ds;
}

/// Principal-branch arccos: -i log(z + i sqrt(1 - z^2)), Re in [0, pi].
inline Complex complex_arccos(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument("complex_arccos: non-finite argument");
  const Complex i1(0, 1);
  return -i1 * std::log(z + i1 * std::sqrt(Complex(1, 0) - z * z));
}

/// sin(E)/E with a series fallback near E = 0 (error O(|E|^4) < 1e-32 there).
inline Complex sinc_complex(Complex e) {
  if (std::abs(e) < 1e-8) return Complex(1, 0) - e * e / 6.0;
  return std::sin(e) / e;
}

struct QrFactors {
  ComplexMatrix q;  // orthonormal columns, rows x cols of the input
  ComplexMatrix r;  // upper triangular, real nonnegative diagonal
};

/// Thin QR with the phase convention that diag(R) is real and nonnegative,
/// which makes the factorization unique and reproducible.
///
/// Throws DegenerateStateError when a column collapses below 1e-13 of the
/// largest orthogonalized column norm.
inline QrFactors qr_decompose(const ComplexMatrix& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  if (rows < 1 || cols < 1 || rows < cols)
    throw std::invalid_argument("qr_decompose: need rows >= cols >= 1");
  if (!m.allFinite()) throw std::invalid_argument("qr_decompose: non-finite input");

  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();

  double dmax = 0.0;
  for (Eigen::Index j = 0; j < cols; ++j) dmax = std::max(dmax, std::abs(r(j, j)));
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double a = std::abs(r(j, j));
    if (dmax == 0.0 || a < 1e-13 * dmax)
      throw DegenerateStateError("qr_decompose: numerically rank-deficient input (column " +
                                 std::to_string(j) + ")");
    const Complex phase = r(j, j) / a;
    q.col(j) *= phase;
    r.row(j) *= std::conj(phase);
    r(j, j) = a;
  }
  return {std::move(q), std::move(r)};
}

struct HermitianSpectrum {
  Eigen::VectorXd eigenvalues;                // ascending
  std::optional<ComplexMatrix> eigenvectors;  // columns match eigenvalue order
};

/// Real spectrum of (M + M^dagger)/2, ascending.
///
/// Rejects inputs whose max-norm deviation from hermiticity exceeds
/// hermiticity_tol instead of silently symmetrizing garbage.
inline HermitianSpectrum hermitian_eigs(const ComplexMatrix& m, double hermiticity_tol,
                                        bool with_vectors = false) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument("hermitian_eigs: matrix must be square and nonempty");
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(dev <= hermiticity_tol))
    throw NonHermitianError("hermitian_eigs: hermiticity deviation " + std::to_string(dev) +
                            " exceeds tolerance " + std::to_string(hermiticity_tol));
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      h, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigs: eigensolver failed to converge");
  HermitianSpectrum out;
  out.eigenvalues = solver.eigenvalues();
  if (with_vectors) out.eigenvectors = solver.eigenvectors();
  return out;
}

struct LeastSquaresFit {
  Eigen::VectorXd coefficients;
  double residual_sum_of_squares = 0.0;
  Eigen::VectorXd standard_errors;  // from unbiased residual variance and (X^T X)^{-1}
};

/// Ordinary linear least squares on an explicit design matrix (one column per
/// basis function). Throws FitDegenerateError on rank-deficient designs.
inline LeastSquaresFit linear_least_squares(const Eigen::MatrixXd& design,
                                            const Eigen::VectorXd& targets) {
  const Eigen::Index n = design.rows(), p = design.cols();
  if (targets.size() != n)
    throw std::invalid_argument("linear_least_squares: design/target size mismatch");
  if (p < 1 || n < p)
    throw FitDegenerateError("linear_least_squares: fewer samples than basis functions");
  if (!design.allFinite() || !targets.allFinite())
    throw std::invalid_argument("linear_least_squares: non-finite input");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < p) throw FitDegenerateError("linear_least_squares: rank-deficient design");

  LeastSquaresFit fit;
  fit.coefficients = qr.solve(targets);
  const Eigen::VectorXd resid = targets - design * fit.coefficients;
  fit.residual_sum_of_squares = resid.squaredNorm();
  const double sigma2 = (n > p) ? fit.residual_sum_of_squares / double(n - p) : 0.0;
  const Eigen::MatrixXd normal_inv = (design.transpose() * design).inverse();
  fit.standard_errors = (sigma2 * normal_inv.diagonal()).cwiseMax(0.0).cwiseSqrt();
  return fit;
}

}  // namespace nhssh
