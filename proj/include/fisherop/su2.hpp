#pragma once

// Spin-j toolkit for the two-mode interferometry results: ladder-built
// generators, the Jy measurement frame, NOON and phase states. Basis order is
// ascending m, so index 0 carries m = -j and Jz = diag(-j ... +j).

#include <cmath>
#include <stdexcept>

#include <fisherop/fisher.hpp>

namespace fisherop {

struct SpinSystem {
  double j = 0.0;
  int dim = 0;
  HermitianOperator jx;
  HermitianOperator jy;
  HermitianOperator jz;
};

inline SpinSystem spin_operators(double j) {
  const double two_j = 2.0 * j;
  const long rounded = std::lround(two_j);
  if (rounded < 1 || std::abs(two_j - static_cast<double>(rounded)) > 1e-12)
    throw std::invalid_argument("spin_operators: 2j must be a positive integer, got j = " +
                                detail::scalar_str(j));
  const int dim = static_cast<int>(rounded) + 1;

  Matrix raising = Matrix::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) {
    const double m = -j + i;
    raising(i + 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  Matrix jz = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) jz(i, i) = -j + i;

  return SpinSystem{j, dim, HermitianOperator(0.5 * (raising + raising.adjoint())),
                    HermitianOperator(Complex(0.0, -0.5) * (raising - raising.adjoint())),
                    HermitianOperator(std::move(jz))};
}

// Jy eigenkets ordered by m ascending, phases fixed by the shared convention.
inline MeasurementBasis jy_eigenbasis(const SpinSystem& sys) {
  return MeasurementBasis(sys.jy.spectrum().eigenvectors);
}

// Equal superposition of the extremal Jy eigenkets.
inline PureState noon_state(const SpinSystem& sys, double chi = 0.0) {
  const Matrix& y = sys.jy.spectrum().eigenvectors;
  const Vector amps =
      (y.col(sys.dim - 1) + std::exp(Complex(0.0, chi)) * y.col(0)) / std::sqrt(2.0);
  return PureState::normalized(amps);
}

// Uniform-modulus superposition over all Jy eigenkets with linear phase ramp.
inline PureState phase_state(const SpinSystem& sys, double zeta = 0.0) {
  const Matrix& y = sys.jy.spectrum().eigenvectors;
  Vector amps = Vector::Zero(sys.dim);
  for (int i = 0; i < sys.dim; ++i) {
    const double m = -sys.j + i;
    amps += std::exp(Complex(0.0, m * zeta)) * y.col(i);
  }
  return PureState::normalized(amps);
}

// Photon-number-difference measurement of the Jy-evolved NOON probe.
inline FisherReport mz_fisher_noon(const SpinSystem& sys, double chi, double theta,
                                   const Tolerances& tol = default_tolerances()) {
  const Scenario s(sys.jy, noon_state(sys, chi), MeasurementBasis::computational(sys.dim));
  return fisher_report(s, theta, tol);
}

inline FisherReport mz_fisher_phase_state(const SpinSystem& sys, double zeta, double theta,
                                          const Tolerances& tol = default_tolerances()) {
  const Scenario s(sys.jy, phase_state(sys, zeta), MeasurementBasis::computational(sys.dim));
  return fisher_report(s, theta, tol);
}

// Largest imaginary part of exp(-i Jy theta) written in the z basis; the
// rotation matrix is real for every j and theta.
inline double wigner_realness_check(const SpinSystem& sys, double theta) {
  const Spectrum& sp = sys.jy.spectrum();
  Vector phases(sys.dim);
  for (int i = 0; i < sys.dim; ++i)
    phases(i) = std::exp(Complex(0.0, -sp.eigenvalues(i) * theta));
  const Matrix rotation = sp.eigenvectors * phases.asDiagonal() * sp.eigenvectors.adjoint();
  return rotation.imag().cwiseAbs().maxCoeff();
}

// The two-element optimal pair (|j,+j>_y +- e^{i xi} |j,-j>_y)/sqrt(2),
// completed to a full basis by the untouched middle Jy eigenkets.
inline MeasurementBasis noon_pair_basis(const SpinSystem& sys, double xi = 0.0) {
  const Matrix& y = sys.jy.spectrum().eigenvectors;
  Matrix kets(sys.dim, sys.dim);
  const Complex phase = std::exp(Complex(0.0, xi));
  kets.col(0) = (y.col(sys.dim - 1) + phase * y.col(0)) / std::sqrt(2.0);
  kets.col(1) = (y.col(sys.dim - 1) - phase * y.col(0)) / std::sqrt(2.0);
  for (int i = 1; i + 1 < sys.dim; ++i) kets.col(i + 1) = y.col(i);
  return MeasurementBasis(std::move(kets));
}

}  // namespace fisherop
