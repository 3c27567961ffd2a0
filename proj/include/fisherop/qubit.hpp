#pragma once

// Closed-form two-level results: the per-outcome information coefficients, the
// J(alpha, beta, gamma) surface, and the known optimum. Conventions: H is
// diagonal with eigenvalues (lambda1, lambda2); the probe is
// cos(gamma)|1> + e^{i chi} sin(gamma)|2>; the measurement pair is the real
// rotation by alpha. The informative phase combination is
// beta = chi - (lambda2 - lambda1) theta.

#include <cmath>
#include <stdexcept>

#include <fisherop/fisher.hpp>

namespace fisherop {

struct QubitScenario {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double alpha = 0.0;  // measurement angle, open (0, pi/2)
  double gamma = 0.0;  // probe angle, open (0, pi/2)
  double chi = 0.0;    // probe phase
  double theta = 0.0;

  double beta() const { return detail::positive_angle(chi - (lambda2 - lambda1) * theta); }

  double eigenvalue_ratio() const {
    if (lambda1 == 0.0)
      throw std::invalid_argument(
          "QubitScenario: eigenvalue ratio undefined at lambda1 = 0; shift both eigenvalues");
    return lambda2 / lambda1;
  }
};

namespace detail {

inline void require_interior_angles(const QubitScenario& s, const char* fn) {
  if (!(s.alpha > 0.0 && s.alpha < kPi / 2.0))
    throw std::invalid_argument(std::string(fn) + ": alpha must lie strictly inside (0, pi/2)");
  if (!(s.gamma > 0.0 && s.gamma < kPi / 2.0))
    throw std::invalid_argument(std::string(fn) + ": gamma must lie strictly inside (0, pi/2)");
}

inline double clamp_unit(double c) {
  if (c < 0.0 && c > -1e-10) return 0.0;
  if (c > 1.0 && c < 1.0 + 1e-10) return 1.0;
  return c;
}

}  // namespace detail

struct CCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
};

// The two cos^2 tau coefficients as explicit functions of (A, R, beta), with
// R = R1 = tan(alpha) tan(gamma) for the first outcome and R2 = tan(gamma)/tan(alpha)
// for the second, the sign alternating between them.
inline CCoefficients c_coefficients(const QubitScenario& s) {
  detail::require_interior_angles(s, "c_coefficients");
  const double a = s.eigenvalue_ratio();
  const double cb = std::cos(s.beta());
  const double r1 = std::tan(s.alpha) * std::tan(s.gamma);
  const double r2 = std::tan(s.gamma) / std::tan(s.alpha);

  const auto one = [&](double r, double sign) {
    const double denom =
        (r * r + 2.0 * sign * cb * r + 1.0) * (a * a * r * r + 2.0 * sign * a * cb * r + 1.0);
    if (std::abs(denom) < 1e-12)
      throw std::domain_error("c_coefficients: degenerate configuration, denominator " +
                              detail::scalar_str(denom));
    const double num = a * r * r + sign * (a + 1.0) * cb * r + 1.0;
    return detail::clamp_unit(1.0 - num * num / denom);
  };
  return CCoefficients{one(r1, +1.0), one(r2, -1.0)};
}

struct ClosedFormJ {
  double value = 0.0;
  bool removable_singularity = false;
};

// J(alpha, beta, gamma) = -4 (l1-l2)^2 sin^2(2a) sin^2(2g) sin^2(b) / (X^2 - 4)
// with X = cos 2(a-g) + cos 2(a+g) + 2 cos(b) sin(2a) sin(2g). The denominator
// vanishes only where the numerator does; the shared limit is
// (l1-l2)^2 sin(2a) sin(2g), which covers every 0/0 locus at once.
inline ClosedFormJ j_closed_form(const QubitScenario& s) {
  detail::require_interior_angles(s, "j_closed_form");
  const double delta = s.lambda1 - s.lambda2;
  const double beta = s.beta();
  const double s2a = std::sin(2.0 * s.alpha);
  const double s2g = std::sin(2.0 * s.gamma);
  const double x = std::cos(2.0 * (s.alpha - s.gamma)) + std::cos(2.0 * (s.alpha + s.gamma)) +
                   2.0 * std::cos(beta) * s2a * s2g;
  const double denom = (x - 2.0) * (x + 2.0);
  if (std::abs(denom) < 1e-12) return ClosedFormJ{delta * delta * s2a * s2g, true};
  const double sb = std::sin(beta);
  return ClosedFormJ{-4.0 * delta * delta * s2a * s2a * s2g * s2g * sb * sb / denom, false};
}

struct OptimalQubit {
  PureState probe;
  MeasurementBasis basis;
  double j_max = 0.0;
};

// Equal superposition probe and the real pi/4 measurement pair; reaches
// (lambda1 - lambda2)^2 at every theta and every chi.
inline OptimalQubit optimal_qubit(double lambda1, double lambda2, double chi = 0.0) {
  if (lambda1 == lambda2)
    throw no_information_error("optimal_qubit: equal eigenvalues leave the probe stationary");
  const double s = 1.0 / std::sqrt(2.0);
  Vector probe(2);
  probe << Complex(s, 0.0), std::exp(Complex(0.0, chi)) * s;
  Matrix kets(2, 2);
  kets << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
  const double delta = lambda1 - lambda2;
  return OptimalQubit{PureState(probe), MeasurementBasis(kets), delta * delta};
}

// The equivalent dense scenario: H = diag(lambda1, lambda2), probe and basis in
// the eigenbasis coordinates.
inline Scenario qubit_numeric(const QubitScenario& s) {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = s.lambda1;
  h(1, 1) = s.lambda2;
  Vector probe(2);
  probe << Complex(std::cos(s.gamma), 0.0), std::exp(Complex(0.0, s.chi)) * std::sin(s.gamma);
  Matrix kets(2, 2);
  kets << Complex(std::cos(s.alpha), 0), Complex(-std::sin(s.alpha), 0),
      Complex(std::sin(s.alpha), 0), Complex(std::cos(s.alpha), 0);
  return Scenario(HermitianOperator(h), PureState(probe), MeasurementBasis(kets));
}

}  // namespace fisherop
