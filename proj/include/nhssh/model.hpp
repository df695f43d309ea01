#pragma once

#include <cmath>
#include <numbers>

#include "nhssh/numerics.hpp"

namespace nhssh {

inline constexpr double kPi = std::numbers::pi;

/// Dimensionless couplings of one driving protocol: intracell hopping j1
/// during the first half period, intercell hopping j2 during the second,
/// and balanced gain/loss gamma (+i gamma on A sites, -i gamma on B sites)
/// acting throughout.
struct ModelParams {
  double j1;
  double j2;
  double gamma;

  ModelParams(double j1_, double j2_, double gamma_) : j1(j1_), j2(j2_), gamma(gamma_) {
    if (!std::isfinite(j1) || !std::isfinite(j2) || !std::isfinite(gamma))
      throw std::invalid_argument("ModelParams: couplings must be finite");
    // gamma < 0 is the same model with sublattices relabeled; rejected so that
    // phase diagrams stay canonical.
    if (gamma < 0.0) throw std::invalid_argument("ModelParams: gamma must be >= 0");
  }
};

/// Quasimomentum wrapped into [-pi, pi).
struct Quasimomentum {
  double k;

  explicit Quasimomentum(double raw) : k(wrap(raw)) {}

  static double wrap(double raw) {
    if (!std::isfinite(raw)) throw std::invalid_argument("Quasimomentum: non-finite value");
    double v = std::remainder(raw, 2.0 * kPi);  // in [-pi, pi]
    if (v >= kPi) v -= 2.0 * kPi;
    return v;
  }
};

/// Generator vector of the first half period: H1 = j1 sigma_x + i gamma sigma_z.
inline Vector3c h1_vector(const ModelParams& p) {
  return Vector3c(Complex(p.j1, 0), Complex(0, 0), Complex(0, p.gamma));
}

/// Generator vector of the second half period at quasimomentum k:
/// H2(k) = j2 cos k sigma_x + j2 sin k sigma_y + i gamma sigma_z.
inline Vector3c h2_vector(const ModelParams& p, Quasimomentum k) {
  return Vector3c(Complex(p.j2 * std::cos(k.k), 0), Complex(p.j2 * std::sin(k.k), 0),
                  Complex(0, p.gamma));
}

inline Matrix2c bloch_h1(const ModelParams& p) { return pauli_dot(h1_vector(p)); }

inline Matrix2c bloch_h2(const ModelParams& p, Quasimomentum k) {
  return pauli_dot(h2_vector(p, k));
}

/// Bloch Floquet operator U(k) = e^{-i H2(k)} e^{-i H1(k)}.
inline Matrix2c bloch_floquet(const ModelParams& p, Quasimomentum k) {
  return exp_two_level(h2_vector(p, k)) * exp_two_level(h1_vector(p));
}

/// Same evolution in the symmetric time frame,
/// e^{-i H1/2} e^{-i H2} e^{-i H1/2}; similar to bloch_floquet, so it shares
/// the spectrum, and it makes the PT symmetry of the model explicit.
inline Matrix2c symmetric_frame_floquet(const ModelParams& p, Quasimomentum k) {
  const Matrix2c half = exp_two_level(0.5 * h1_vector(p));
  return half * exp_two_level(h2_vector(p, k)) * half;
}

/// Max-norm violation of sigma_x conj(U(k)) sigma_x = U(k)^{-1} for the
/// symmetric-frame operator (parity = sigma_x, time reversal = complex
/// conjugation). Zero up to roundoff for this model at any parameters.
inline double check_pt_symmetry(const ModelParams& p, Quasimomentum k) {
  const Matrix2c u = symmetric_frame_floquet(p, k);
  const Matrix2c sx = pauli_x();
  const Matrix2c pt_u_pt = sx * u.conjugate() * sx;
  const Matrix2c u_inv = u.inverse();
  return (pt_u_pt - u_inv).cwiseAbs().maxCoeff();
}

/// Floquet bands +E and -E at one quasimomentum, together with the real
/// number cos E they derive from.
struct QuasienergyPair {
  Complex e_plus;   // Re in [0, pi]
  Complex e_minus;  // -e_plus
  double cos_e;
};

/// Quasienergy dispersion
///   cos E(k) = cos E1 cos E2 - n1.n2 sin E1 sin E2,
/// with E1 = sqrt(j1^2 - gamma^2), E2 = sqrt(j2^2 - gamma^2) and the unit
/// generator vectors n1, n2. The products n_i sin(E_i) are evaluated as
/// d_i sinc(E_i), which stays finite at the exceptional points E_i = 0.
/// cos E is real for every (params, k); the imaginary part of the complex
/// intermediate is asserted below 1e-10 and discarded.
inline QuasienergyPair quasienergy(const ModelParams& p, Quasimomentum k) {
  const Complex e1 = std::sqrt(Complex(p.j1 * p.j1 - p.gamma * p.gamma, 0));
  const Complex e2 = std::sqrt(Complex(p.j2 * p.j2 - p.gamma * p.gamma, 0));
  // d1.d2 with d1 = (j1, 0, i gamma), d2 = (j2 cos k, j2 sin k, i gamma).
  const double d1_dot_d2 = p.j1 * p.j2 * std::cos(k.k) - p.gamma * p.gamma;
  const Complex raw =
      std::cos(e1) * std::cos(e2) - d1_dot_d2 * sinc_complex(e1) * sinc_complex(e2);
  if (!(std::abs(raw.imag()) < 1e-10))
    throw std::runtime_error("quasienergy: cos E acquired imaginary part " +
                             std::to_string(raw.imag()));
  QuasienergyPair out;
  out.cos_e = raw.real();
  out.e_plus = complex_arccos(Complex(out.cos_e, 0));
  out.e_minus = -out.e_plus;
  return out;
}

}  // namespace nhssh
