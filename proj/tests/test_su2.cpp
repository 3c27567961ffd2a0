#include <fisherop/qubit.hpp>
#include <fisherop/su2.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace fisherop;

namespace {

double commutator_residual(const Matrix& a, const Matrix& b, const Matrix& c) {
  return (a * b - b * a - Complex(0, 1) * c).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("spin_operators rejects non-half-integer and non-positive j") {
  REQUIRE_THROWS_AS(spin_operators(0.3), std::invalid_argument);
  REQUIRE_THROWS_AS(spin_operators(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(spin_operators(-1.0), std::invalid_argument);
  REQUIRE_NOTHROW(spin_operators(0.5));
  REQUIRE_NOTHROW(spin_operators(7.5));
}

TEST_CASE("spin one-half generators in the ascending-m basis") {
  const SpinSystem sys = spin_operators(0.5);
  REQUIRE(sys.dim == 2);
  Matrix jx(2, 2), jy(2, 2), jz(2, 2);
  jx << Complex(0, 0), Complex(0.5, 0), Complex(0.5, 0), Complex(0, 0);
  jy << Complex(0, 0), Complex(0, 0.5), Complex(0, -0.5), Complex(0, 0);
  jz << Complex(-0.5, 0), Complex(0, 0), Complex(0, 0), Complex(0.5, 0);
  REQUIRE((sys.jx.matrix() - jx).cwiseAbs().maxCoeff() < 1e-15);
  REQUIRE((sys.jy.matrix() - jy).cwiseAbs().maxCoeff() < 1e-15);
  REQUIRE((sys.jz.matrix() - jz).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("spin 1 has Jz = diag(-1, 0, 1)") {
  const SpinSystem sys = spin_operators(1.0);
  REQUIRE(sys.dim == 3);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(sys.jz.matrix()(i, i).real() == Catch::Approx(static_cast<double>(i - 1)).margin(1e-15));
    REQUIRE(sys.jz.matrix()(i, i).imag() == 0.0);
  }
}

TEST_CASE("commutators and Casimir invariant across spins") {
  for (double j : {0.5, 1.0, 1.5, 2.5, 5.0}) {
    const SpinSystem sys = spin_operators(j);
    const Matrix &x = sys.jx.matrix(), &y = sys.jy.matrix(), &z = sys.jz.matrix();
    REQUIRE(commutator_residual(x, y, z) < 1e-10);
    REQUIRE(commutator_residual(y, z, x) < 1e-10);
    REQUIRE(commutator_residual(z, x, y) < 1e-10);
    const Matrix casimir = x * x + y * y + z * z;
    const Matrix expected = j * (j + 1.0) * Matrix::Identity(sys.dim, sys.dim);
    REQUIRE((casimir - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Jy eigenbasis diagonalizes Jy with ascending m") {
  const SpinSystem sys = spin_operators(4.0);
  const MeasurementBasis basis = jy_eigenbasis(sys);
  for (int i = 0; i < sys.dim; ++i) {
    const double m = -sys.j + i;
    const Vector residual = sys.jy.matrix() * basis.ket(i) - m * basis.ket(i);
    REQUIRE(residual.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("spin one-half Jy eigenkets are (1, -+i)/sqrt(2) up to phase") {
  const SpinSystem sys = spin_operators(0.5);
  const MeasurementBasis basis = jy_eigenbasis(sys);
  Vector down(2), up(2);
  down << Complex(1, 0), Complex(0, 1);   // m = -1/2
  up << Complex(1, 0), Complex(0, -1);    // m = +1/2
  REQUIRE(std::abs(basis.ket(0).dot(down / std::sqrt(2.0))) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(std::abs(basis.ket(1).dot(up / std::sqrt(2.0))) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("phase convention pairs the +-m Jy eigenkets as exact conjugates") {
  // Jy is purely imaginary, so conjugation maps the m eigenket onto the -m one;
  // the shared phase convention must preserve that pairing. This is the root of
  // the real Wigner rotation elements.
  for (double j : {1.5, 3.0}) {
    const SpinSystem sys = spin_operators(j);
    const Matrix& y = sys.jy.spectrum().eigenvectors;
    for (int i = 0; i < sys.dim; ++i)
      REQUIRE((y.col(i).conjugate() - y.col(sys.dim - 1 - i)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("NOON state overlaps the extremal Jy kets with modulus 1/sqrt(2)") {
  const SpinSystem sys = spin_operators(2.5);
  const PureState noon = noon_state(sys, 0.9);
  const Matrix& y = sys.jy.spectrum().eigenvectors;
  REQUIRE(std::abs(y.col(0).dot(noon.amplitudes())) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
  REQUIRE(std::abs(y.col(sys.dim - 1).dot(noon.amplitudes())) ==
          Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
  for (int i = 1; i + 1 < sys.dim; ++i)
    REQUIRE(std::abs(y.col(i).dot(noon.amplitudes())) < 1e-12);
}

TEST_CASE("photon-number measurement of the NOON probe is Heisenberg-limited") {
  for (double j : {0.5, 1.0, 2.0, 3.5, 5.0}) {
    const SpinSystem sys = spin_operators(j);
    for (double theta : {0.0, 0.37, 1.9}) {
      const FisherReport rep = mz_fisher_noon(sys, 0.0, theta);
      REQUIRE(rep.fisher_info == Catch::Approx(4.0 * j * j).epsilon(1e-8));
      REQUIRE(rep.seminorm_bound == Catch::Approx(4.0 * j * j).epsilon(1e-12));
    }
  }
  // chi shifts the fringe but not the information
  const SpinSystem sys = spin_operators(1.0);
  REQUIRE(mz_fisher_noon(sys, 2.2, 0.6).fisher_info == Catch::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("spin one-half NOON probe reproduces the qubit optimum") {
  const SpinSystem sys = spin_operators(0.5);
  const FisherReport rep = mz_fisher_noon(sys, 0.4, 1.1);
  REQUIRE(rep.fisher_info == Catch::Approx(optimal_qubit(-0.5, 0.5, 0.4).j_max).epsilon(1e-8));
}

TEST_CASE("phase state has uniform moduli and translates under evolution") {
  const SpinSystem sys = spin_operators(2.0);
  const PureState ps = phase_state(sys, 0.7);
  const Matrix& y = sys.jy.spectrum().eigenvectors;
  for (int i = 0; i < sys.dim; ++i)
    REQUIRE(std::abs(y.col(i).dot(ps.amplitudes())) ==
            Catch::Approx(1.0 / std::sqrt(5.0)).margin(1e-12));

  const PureState evolved = evolve(ps, sys.jy, 0.3);
  const PureState translated = phase_state(sys, 0.7 - 0.3);
  REQUIRE(std::abs(translated.amplitudes().dot(evolved.amplitudes())) > 1.0 - 1e-10);
}

TEST_CASE("phase state second moment of Jy is j(j+1)/3") {
  const SpinSystem sys = spin_operators(1.0);
  const PureState ps = phase_state(sys, 0.0);
  const Vector jy_psi = sys.jy.matrix() * ps.amplitudes();
  REQUIRE(jy_psi.squaredNorm() == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("phase-state scaling: J = 4 j (j+1) / 3 with vanishing complement") {
  REQUIRE(mz_fisher_phase_state(spin_operators(1.0), 0.0, 0.8).fisher_info ==
          Catch::Approx(8.0 / 3.0).epsilon(1e-8));
  REQUIRE(mz_fisher_phase_state(spin_operators(10.0), 0.0, 0.8).fisher_info ==
          Catch::Approx(440.0 / 3.0).epsilon(1e-8));

  const SpinSystem sys = spin_operators(3.0);
  for (double theta : {0.0, 0.5, 1.4, 2.9, 5.5}) {
    const FisherReport rep = mz_fisher_phase_state(sys, 0.0, theta);
    REQUIRE(rep.complement < 1e-10);
    REQUIRE(rep.fisher_info == Catch::Approx(16.0).epsilon(1e-8));
  }
}

TEST_CASE("phase-state information is independent of theta and zeta") {
  const SpinSystem sys = spin_operators(2.0);
  const double expected = 8.0;  // 4 j (j+1) / 3
  double lo = expected, hi = expected;
  for (int i = 0; i < 20; ++i) {
    const double theta = i * 2.0 * kPi / 19.0;
    const double value = mz_fisher_phase_state(sys, 0.0, theta).fisher_info;
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  REQUIRE(hi - lo < 1e-8);
  for (double zeta : {0.3, 1.8, 4.4})
    REQUIRE(mz_fisher_phase_state(sys, zeta, 0.9).fisher_info ==
            Catch::Approx(expected).epsilon(1e-8));
}

TEST_CASE("Jy rotation matrices in the z basis are real") {
  const SpinSystem half = spin_operators(0.5);
  REQUIRE(wigner_realness_check(half, 0.0) < 1e-14);
  const Spectrum& sp = half.jy.spectrum();
  Vector phases(2);
  phases << std::exp(Complex(0, 0.25 * kPi)), std::exp(Complex(0, -0.25 * kPi));
  const Matrix rot = sp.eigenvectors * phases.asDiagonal() * sp.eigenvectors.adjoint();
  REQUIRE(rot(0, 0).real() == Catch::Approx(std::cos(kPi / 4.0)).margin(1e-12));
  REQUIRE(rot(1, 1).real() == Catch::Approx(std::cos(kPi / 4.0)).margin(1e-12));
  REQUIRE(std::abs(rot(0, 1).real()) == Catch::Approx(std::sin(kPi / 4.0)).margin(1e-12));
  REQUIRE(rot.imag().cwiseAbs().maxCoeff() < 1e-12);

  for (double j : {2.0, 5.5, 10.0})
    for (int i = 0; i < 8; ++i)
      REQUIRE(wigner_realness_check(spin_operators(j), i * 2.0 * kPi / 8.0) < 1e-10);
}

TEST_CASE("the two-element pair basis matches the full Jz basis information") {
  for (double j : {1.0, 2.0}) {
    const SpinSystem sys = spin_operators(j);
    const double expected = 4.0 * j * j;
    for (double xi : {0.0, 0.8, 2.9}) {
      const Scenario s(sys.jy, noon_state(sys, 0.3), noon_pair_basis(sys, xi));
      REQUIRE(fisher_report(s, 0.7).fisher_info == Catch::Approx(expected).epsilon(1e-8));
    }
    REQUIRE(mz_fisher_noon(sys, 0.3, 0.7).fisher_info == Catch::Approx(expected).epsilon(1e-8));
  }
}
