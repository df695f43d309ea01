#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nhssh/model.hpp"
#include "oracles.hpp"

using namespace nhssh;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Closed-form eigenvalues of a 2x2 matrix, for spectrum comparisons that do
/// not route through any library eigensolver.
std::pair<Complex, Complex> eigs_2x2(const Matrix2c& m) {
  const Complex t = m.trace();
  const Complex disc = std::sqrt(t * t - 4.0 * m.determinant());
  return {0.5 * (t + disc), 0.5 * (t - disc)};
}

bool same_multiset(std::pair<Complex, Complex> a, std::pair<Complex, Complex> b, double tol) {
  const double direct = std::max(std::abs(a.first - b.first), std::abs(a.second - b.second));
  const double crossed = std::max(std::abs(a.first - b.second), std::abs(a.second - b.first));
  return std::min(direct, crossed) < tol;
}

}  // namespace

TEST_CASE("ModelParams validation", "[model]") {
  CHECK_THROWS_AS(ModelParams(0.1, 0.2, -0.3), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(std::nan(""), 0.2, 0.3), std::invalid_argument);
  CHECK_NOTHROW(ModelParams(-2.0, 3.0, 0.0));
}

TEST_CASE("Quasimomentum wraps into [-pi, pi)", "[model]") {
  CHECK(Quasimomentum(kPi).k == Catch::Approx(-kPi));
  CHECK(Quasimomentum(-kPi).k == Catch::Approx(-kPi));
  CHECK(Quasimomentum(2.5 * kPi).k == Catch::Approx(0.5 * kPi));
  CHECK(Quasimomentum(-7.0).k >= -kPi);
  CHECK(Quasimomentum(-7.0).k < kPi);
}

TEST_CASE("bloch_h1 structure", "[model]") {
  CHECK(max_abs(bloch_h1(ModelParams(0, 1, 0))) == 0.0);
  CHECK(max_abs(bloch_h1(ModelParams(1, 0, 0)) - pauli_x()) < 1e-15);

  const Matrix2c h = bloch_h1(ModelParams(0.1 * kPi, 0, 0.5 * kPi));
  CHECK(h(0, 0) == Complex(0, 0.5 * kPi));
  CHECK(h(1, 1) == Complex(0, -0.5 * kPi));
  CHECK(h(0, 1) == Complex(0.1 * kPi, 0));
  CHECK(h(1, 0) == Complex(0.1 * kPi, 0));
}

TEST_CASE("bloch_h2 structure", "[model]") {
  const ModelParams p(0.3, 0.7, 0.2);
  const Matrix2c at_zero = bloch_h2(p, Quasimomentum(0.0));
  const Matrix2c h1_like = bloch_h1(ModelParams(0.7, 0.0, 0.2));
  CHECK(max_abs(at_zero - h1_like) < 1e-15);

  const Matrix2c at_pi = bloch_h2(ModelParams(0.0, 0.7, 0.0), Quasimomentum(kPi));
  CHECK(max_abs(at_pi + 0.7 * pauli_x()) < 1e-12);

  const Matrix2c onsite = bloch_h2(ModelParams(1.0, 0.0, 0.4), Quasimomentum(1.234));
  CHECK(max_abs(onsite - Complex(0, 0.4) * pauli_z()) < 1e-15);
}

TEST_CASE("bloch_floquet reference points", "[model]") {
  const Matrix2c u1 = bloch_floquet(ModelParams(kPi / 2, kPi / 2, 0), Quasimomentum(0.0));
  CHECK(max_abs(u1 + Matrix2c::Identity()) < 1e-14);

  const Matrix2c u2 = bloch_floquet(ModelParams(0, 0, 1.0), Quasimomentum(0.4));
  Matrix2c expected = Matrix2c::Zero();
  expected(0, 0) = std::exp(2.0);
  expected(1, 1) = std::exp(-2.0);
  CHECK(max_abs(u2 - expected) < 1e-12);
}

TEST_CASE("bloch_floquet eigenvalues match the closed-form 2x2 oracle", "[model]") {
  std::mt19937_64 rng(201);
  std::uniform_real_distribution<double> uk(-kPi, kPi);
  for (int rep = 0; rep < 100; ++rep) {
    const ModelParams p = oracles::random_params(rng);
    const Quasimomentum k(uk(rng));
    const Matrix2c u = bloch_floquet(p, k);
    const Matrix2c explicit_product =
        exp_two_level(h2_vector(p, k)) * exp_two_level(h1_vector(p));
    CHECK(same_multiset(eigs_2x2(u), eigs_2x2(explicit_product), 1e-12));
    // both bands multiply to det = 1
    CHECK(std::abs(u.determinant() - Complex(1, 0)) < 1e-10);
  }
}

TEST_CASE("symmetric frame: limits and spectral equivalence", "[model]") {
  const Matrix2c no_h2 = symmetric_frame_floquet(ModelParams(0.9, 0.0, 0.0), Quasimomentum(1.0));
  CHECK(max_abs(no_h2 - exp_two_level(Vector3c(0.9, 0, 0))) < 1e-13);

  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> uk(-kPi, kPi);
  for (int rep = 0; rep < 100; ++rep) {
    const ModelParams p = oracles::random_params(rng);
    const Quasimomentum k(uk(rng));
    const Matrix2c a = bloch_floquet(p, k);
    const Matrix2c b = symmetric_frame_floquet(p, k);
    CHECK(std::abs(a.trace() - b.trace()) <= 1e-12 * std::max(1.0, std::abs(a.trace())));
    CHECK(same_multiset(eigs_2x2(a), eigs_2x2(b), 1e-10 * std::max(1.0, std::abs(a.trace()))));
  }
}

TEST_CASE("PT symmetry holds for the model", "[model]") {
  std::mt19937_64 rng(203);
  std::uniform_real_distribution<double> uk(-kPi, kPi);
  for (int rep = 0; rep < 200; ++rep) {
    const ModelParams p = oracles::random_params(rng, 2.0 * kPi, 1.5 * kPi);
    CHECK(check_pt_symmetry(p, Quasimomentum(uk(rng))) < 1e-10);
  }
  for (int rep = 0; rep < 50; ++rep) {
    std::uniform_real_distribution<double> uj(-2.0 * kPi, 2.0 * kPi);
    const ModelParams hermitian(uj(rng), uj(rng), 0.0);
    CHECK(check_pt_symmetry(hermitian, Quasimomentum(uk(rng))) < 1e-12);
  }
}

TEST_CASE("a PT-breaking perturbation is detected", "[model]") {
  // add eps sigma_z (real) to H1: the perturbed half-period generator no
  // longer commutes with PT, and the violation scales with eps
  const double eps = 1e-3;
  const ModelParams p(0.6, 1.1, 0.3);
  const Quasimomentum k(0.7);
  const Vector3c broken_h1 = h1_vector(p) + Vector3c(0, 0, eps);
  const Matrix2c half = exp_two_level((0.5 * broken_h1).eval());
  const Matrix2c u = half * exp_two_level(h2_vector(p, k)) * half;
  const Matrix2c sx = pauli_x();
  const double violation = ((sx * u.conjugate() * sx) - u.inverse()).cwiseAbs().maxCoeff();
  CHECK(violation > eps / 2.0);
}

TEST_CASE("quasienergy reference points", "[model]") {
  const QuasienergyPair border = quasienergy(ModelParams(kPi / 2, kPi / 2, 0), Quasimomentum(0));
  CHECK(border.cos_e == Catch::Approx(-1.0).margin(1e-12));
  CHECK(border.e_plus.real() == Catch::Approx(kPi).margin(1e-7));
  CHECK(std::abs(border.e_plus.imag()) < 1e-6);

  const QuasienergyPair onsite = quasienergy(ModelParams(0, 0, 1.0), Quasimomentum(0.3));
  CHECK(onsite.cos_e == Catch::Approx(std::cosh(2.0)).margin(1e-12));
  CHECK(std::abs(onsite.e_plus - Complex(0, 2)) < 1e-12);
  CHECK(std::abs(onsite.e_minus + onsite.e_plus) == 0.0);
}

TEST_CASE("quasienergy is regular at the exceptional points", "[model]") {
  // j1 = gamma makes E1 = 0; the sinc form must hand back d1 itself
  const ModelParams p(0.4, 1.3, 0.4);
  const QuasienergyPair qe = quasienergy(p, Quasimomentum(0.9));
  const double dot = p.j1 * p.j2 * std::cos(0.9) - p.gamma * p.gamma;
  const Complex e2 = std::sqrt(Complex(p.j2 * p.j2 - p.gamma * p.gamma, 0));
  const Complex expected = std::cos(e2) - dot * sinc_complex(e2);
  CHECK(qe.cos_e == Catch::Approx(expected.real()).margin(1e-12));
}

TEST_CASE("quasienergy matches i log of the Floquet eigenvalues on a 1024 grid", "[model]") {
  const ModelParams p(2.2 * kPi, 2.0 * kPi / 3.0, 1.3 * kPi);
  for (int m = 0; m < 1024; ++m) {
    const Quasimomentum k(-kPi + (m + 0.5) * (2.0 * kPi / 1024));
    const QuasienergyPair qe = quasienergy(p, k);
    const auto [l1, l2] = eigs_2x2(bloch_floquet(p, k));
    const Complex i1(0, 1);
    // branch-matched: fold Re(E) differences into (-pi, pi]
    auto matches = [&](Complex e, Complex lambda) {
      const Complex e_log = i1 * std::log(lambda);
      const double dre = std::remainder(e.real() - e_log.real(), 2.0 * kPi);
      const double dim = e.imag() - e_log.imag();
      return std::hypot(dre, dim) < 1e-9;
    };
    const bool direct = matches(qe.e_plus, l1) && matches(qe.e_minus, l2);
    const bool crossed = matches(qe.e_plus, l2) && matches(qe.e_minus, l1);
    CHECK((direct || crossed));
  }
}

TEST_CASE("cos E is real over random parameters", "[model]") {
  // the dispersion intermediate must stay real to 1e-10; quasienergy() itself
  // asserts this, so it is enough that no sample throws
  std::mt19937_64 rng(204);
  std::uniform_real_distribution<double> uk(-kPi, kPi);
  for (int rep = 0; rep < 10000; ++rep) {
    const ModelParams p = oracles::random_params(rng);
    CHECK_NOTHROW(quasienergy(p, Quasimomentum(uk(rng))));
  }
}

TEST_CASE("hermitian limit: gamma = 0 gives real bands", "[model]") {
  std::mt19937_64 rng(205);
  std::uniform_real_distribution<double> uj(-3.0 * kPi, 3.0 * kPi);
  const ModelParams p(uj(rng), uj(rng), 0.0);
  for (int m = 0; m < 257; ++m) {
    const QuasienergyPair qe = quasienergy(p, Quasimomentum(-kPi + 2.0 * kPi * m / 257.0));
    CHECK(std::abs(qe.e_plus.imag()) < 1e-12);
  }
}
