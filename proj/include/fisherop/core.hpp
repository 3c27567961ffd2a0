// core.hpp — pure states, Hermitian operators, cached spectra, unitary
// evolution, and amplitude decompositions in a measurement basis.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fisherop {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr double kPi = 3.14159265358979323846;

// ---------- tolerances ----------

// Every numeric threshold used by the library, collected in one record so a
// run can override them coherently instead of hunting for magic numbers.
struct Tolerances {
  double hermiticity = 1e-12;           // max |H - H^dag| accepted
  double unitarity = 1e-10;             // max |U^dag U - 1| accepted
  double reconstruction = 1e-10;        // max |H - U L U^dag| after eigendecomposition
  double state_norm = 1e-12;            // | ||psi||^2 - 1 | accepted
  double degenerate_amplitude = 1e-14;  // below this r_k the outcome phase is undefined
  double probability_floor = 1e-12;     // epsilon floor for p_k in likelihood sums
  double fd_step = 1e-6;                // central finite-difference step in theta
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

// Raised when a configuration carries no information about theta at all
// (equal eigenvalues, flat likelihood, ...).
class no_information_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string scalar_str(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Map into (-pi, pi].
inline double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Map into [0, 2pi).
inline double positive_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

// Fixed phase convention: the first component whose magnitude is within a
// relative band of the column maximum is made real and positive. The band
// matters: structured operators (spin matrices especially) produce exact
// magnitude ties, and a strict argmax would let last-ulp solver noise pick
// different rows for a conjugate pair of eigenvectors. With a stable row
// choice, repeated decompositions of equal inputs agree bit for bit and
// conjugate eigenvector pairs stay conjugates.
inline void apply_phase_convention(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r)
      best = std::max(best, std::abs(vectors(r, c)));
    if (best == 0.0) continue;
    Eigen::Index lead = 0;
    while (std::abs(vectors(lead, c)) < best * (1.0 - 1e-8)) ++lead;
    const double mag = std::abs(vectors(lead, c));
    vectors.col(c) *= std::conj(vectors(lead, c)) / mag;
    vectors(lead, c) = Complex(mag, 0.0);  // rotation leaves ~1e-17 imag slop otherwise
  }
}

}  // namespace detail

// ---------- spectra ----------

// Eigenvalues ascending; eigenvector columns carry the phase convention above.
struct Spectrum {
  RealVector eigenvalues;
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]
};

// ---------- operators ----------

class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries, const Tolerances& tol = default_tolerances())
      : entries_(std::move(entries)), tol_(tol), cache_(std::make_shared<Cache>()) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
      throw std::invalid_argument("HermitianOperator: matrix must be square and non-empty");
    const double dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (!(dev <= tol_.hermiticity))
      throw std::invalid_argument("HermitianOperator: not Hermitian, max |H - H^dag| = " +
                                  detail::scalar_str(dev));
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  const Tolerances& tolerances() const { return tol_; }

  // Computed once per operator, safe to read from many threads; copies of the
  // operator share the cache.
  const Spectrum& spectrum() const {
    std::call_once(cache_->once, [this] { cache_->spectrum = compute_spectrum(); });
    return cache_->spectrum;
  }

  double min_eigenvalue() const { return spectrum().eigenvalues(0); }
  double max_eigenvalue() const { return spectrum().eigenvalues(dim() - 1); }

 private:
  struct Cache {
    std::once_flag once;
    Spectrum spectrum;
  };

  Spectrum compute_spectrum() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("HermitianOperator: eigendecomposition did not converge");
    Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
    detail::apply_phase_convention(s.eigenvectors);
    const double resid =
        (entries_ - s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint())
            .cwiseAbs()
            .maxCoeff();
    if (!(resid <= tol_.reconstruction))
      throw std::runtime_error("HermitianOperator: reconstruction residual " +
                               detail::scalar_str(resid) + " exceeds tolerance");
    return s;
  }

  Matrix entries_;
  Tolerances tol_;
  std::shared_ptr<Cache> cache_;
};

inline const Spectrum& eigendecompose(const HermitianOperator& h) { return h.spectrum(); }

// ---------- states ----------

class PureState {
 public:
  explicit PureState(Vector amplitudes, const Tolerances& tol = default_tolerances())
      : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) throw std::invalid_argument("PureState: empty amplitude vector");
    const double dev = std::abs(amplitudes_.squaredNorm() - 1.0);
    if (!(dev <= tol.state_norm))
      throw std::invalid_argument("PureState: not normalized, | ||psi||^2 - 1 | = " +
                                  detail::scalar_str(dev));
  }

  // Scales an arbitrary non-zero vector onto the unit sphere.
  static PureState normalized(Vector amplitudes, const Tolerances& tol = default_tolerances()) {
    const double norm = amplitudes.norm();
    if (!(norm > 1e-150))
      throw std::invalid_argument("PureState: cannot normalize a (near-)zero vector");
    amplitudes /= norm;
    return PureState(std::move(amplitudes), tol);
  }

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  Vector amplitudes_;
};

// ---------- measurement bases ----------

// Complete projective measurement; kets are the columns of a unitary matrix.
class MeasurementBasis {
 public:
  explicit MeasurementBasis(Matrix kets, const Tolerances& tol = default_tolerances())
      : kets_(std::move(kets)) {
    if (kets_.rows() != kets_.cols() || kets_.rows() < 1)
      throw std::invalid_argument("MeasurementBasis: ket matrix must be square and non-empty");
    const double dev =
        (kets_.adjoint() * kets_ - Matrix::Identity(kets_.rows(), kets_.cols())).cwiseAbs().maxCoeff();
    if (!(dev <= tol.unitarity))
      throw std::invalid_argument("MeasurementBasis: kets not orthonormal, max |U^dag U - 1| = " +
                                  detail::scalar_str(dev));
  }

  static MeasurementBasis computational(int dim) {
    return MeasurementBasis(Matrix::Identity(dim, dim));
  }

  int dim() const { return static_cast<int>(kets_.rows()); }
  const Matrix& kets() const { return kets_; }
  Vector ket(int k) const { return kets_.col(k); }

 private:
  Matrix kets_;
};

// ---------- evolution and decomposition ----------

struct AmplitudeDecomposition {
  RealVector radii;              // r_k = |<k|psi>|
  RealVector phases;             // phi_k in [0, 2pi); 0 where degenerate
  RealVector probabilities;      // p_k = r_k^2
  std::vector<bool> degenerate;  // r_k below Tolerances::degenerate_amplitude
};

// exp(-i H theta) |psi0> through the cached spectrum.
inline PureState evolve(const PureState& psi0, const HermitianOperator& h, double theta) {
  if (psi0.dim() != h.dim())
    throw std::invalid_argument("evolve: state and operator dimensions differ");
  const Spectrum& s = h.spectrum();
  Vector rotated = s.eigenvectors.adjoint() * psi0.amplitudes();
  for (Eigen::Index i = 0; i < rotated.size(); ++i)
    rotated(i) *= std::exp(Complex(0.0, -s.eigenvalues(i) * theta));
  Vector out = s.eigenvectors * rotated;
  out /= out.norm();  // shed unitary round-off
  return PureState(std::move(out), h.tolerances());
}

inline AmplitudeDecomposition decompose(const PureState& psi, const MeasurementBasis& basis,
                                        const Tolerances& tol = default_tolerances()) {
  if (psi.dim() != basis.dim())
    throw std::invalid_argument("decompose: state and basis dimensions differ");
  const Vector amps = basis.kets().adjoint() * psi.amplitudes();
  const int dim = psi.dim();
  AmplitudeDecomposition d;
  d.radii.resize(dim);
  d.phases.resize(dim);
  d.probabilities.resize(dim);
  d.degenerate.assign(dim, false);
  for (int k = 0; k < dim; ++k) {
    const double r = std::abs(amps(k));
    d.radii(k) = r;
    d.probabilities(k) = std::norm(amps(k));
    if (r < tol.degenerate_amplitude) {
      d.degenerate[k] = true;
      d.phases(k) = 0.0;
    } else {
      d.phases(k) = detail::positive_angle(std::arg(amps(k)));
    }
  }
  return d;
}

}  // namespace fisherop
