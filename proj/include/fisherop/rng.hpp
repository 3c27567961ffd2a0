// rng.hpp — deterministic sampling helpers shared by the optimizer, the
// estimation harness, and the randomized test generators.  std::mt19937_64 is
// portable but the std distributions are not, so draws are built by hand.
#pragma once

#include "core.hpp"

#include <cstdint>
#include <random>

namespace fisherop {

// Uniform double in [0, 1) with reproducible bits across platforms.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_double(rng);
}

// Box-Muller; one value per call keeps the draw order obvious.
inline double normal_double(std::mt19937_64& rng) {
  double u1 = uniform_double(rng);
  while (u1 <= 0.0) u1 = uniform_double(rng);
  const double u2 = uniform_double(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

inline Complex normal_complex(std::mt19937_64& rng) {
  const double re = normal_double(rng);
  const double im = normal_double(rng);
  return Complex(re, im);
}

inline PureState random_pure_state(int dim, std::mt19937_64& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal_complex(rng);
  return PureState::normalized(std::move(v));
}

inline HermitianOperator random_hermitian(int dim, std::mt19937_64& rng, double scale = 1.0) {
  Matrix a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = normal_complex(rng);
  Matrix h = (a + a.adjoint()) * (0.5 * scale);
  return HermitianOperator(std::move(h));
}

// Haar-distributed basis via QR with the R-diagonal phase fix.  Deliberately
// independent of the optimizer's Givens parameterization.
inline MeasurementBasis random_basis(int dim, std::mt19937_64& rng) {
  Matrix a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = normal_complex(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const double mag = std::abs(r(c, c));
    if (mag > 0.0) q.col(c) *= r(c, c) / mag;
  }
  return MeasurementBasis(std::move(q));
}

}  // namespace fisherop
