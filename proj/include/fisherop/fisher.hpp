#pragma once

// Classical Fisher information of a (probe, Hamiltonian, basis, theta) scenario
// by three routes: the probability-derivative sum, the trace of the Fisher
// operator against H, and the information-complement identity J/4 = <H^2> - K.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <fisherop/core.hpp>

namespace fisherop {

struct Scenario {
  HermitianOperator hamiltonian;
  PureState probe;
  MeasurementBasis basis;

  Scenario(HermitianOperator h, PureState psi0, MeasurementBasis b)
      : hamiltonian(std::move(h)), probe(std::move(psi0)), basis(std::move(b)) {
    if (hamiltonian.dim() != probe.dim() || hamiltonian.dim() != basis.dim())
      throw std::invalid_argument("Scenario: H, probe and basis dimensions differ");
  }

  int dim() const { return hamiltonian.dim(); }
};

namespace detail {

// Sum in value order so the result is invariant under permutations of the
// terms, bit for bit. Reporting paths only; hot loops use plain sums.
inline double stable_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

// Everything downstream needs the same three vectors; compute them once.
struct Frame {
  PureState psi_theta;
  Vector a;  // <k|psi_theta>
  Vector w;  // <k|H|psi_theta>
  AmplitudeDecomposition dec;
};

inline Frame make_frame(const Scenario& s, double theta, const Tolerances& tol) {
  PureState psi_theta = evolve(s.probe, s.hamiltonian, theta);
  Vector a = s.basis.kets().adjoint() * psi_theta.amplitudes();
  Vector w = s.basis.kets().adjoint() * (s.hamiltonian.matrix() * psi_theta.amplitudes());
  AmplitudeDecomposition dec = decompose(psi_theta, s.basis, tol);
  return Frame{std::move(psi_theta), std::move(a), std::move(w), std::move(dec)};
}

}  // namespace detail

// ---------- route 1: probability derivatives ----------

struct DistributionFisher {
  double value = 0.0;
  bool singular = false;  // some p_k below the floor carried non-negligible p_dot^2
};

inline DistributionFisher fisher_from_distribution(const RealVector& p, const RealVector& p_dot,
                                                   const Tolerances& tol = default_tolerances()) {
  if (p.size() != p_dot.size())
    throw std::invalid_argument("fisher_from_distribution: p and p_dot lengths differ");
  for (Eigen::Index k = 0; k < p.size(); ++k)
    if (p(k) < 0.0)
      throw std::invalid_argument("fisher_from_distribution: negative probability at outcome " +
                                  std::to_string(k));
  if (std::abs(p.sum() - 1.0) > 1e-10)
    throw std::invalid_argument("fisher_from_distribution: probabilities sum to " +
                                detail::scalar_str(p.sum()));

  const double eps = tol.probability_floor;
  DistributionFisher out;
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(p.size()));
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) >= eps) {
      terms.push_back(p_dot(k) * p_dot(k) / p(k));
    } else if (p_dot(k) * p_dot(k) >= eps) {
      out.singular = true;  // genuine divergence of the sum, not a removable 0/0
    }
  }
  out.value = out.singular ? std::numeric_limits<double>::infinity() : detail::stable_sum(terms);
  return out;
}

inline Vector state_derivative(const HermitianOperator& h, const PureState& psi_theta) {
  if (h.dim() != psi_theta.dim())
    throw std::invalid_argument("state_derivative: dimensions differ");
  return Complex(0.0, -1.0) * (h.matrix() * psi_theta.amplitudes());
}

struct ProbabilityDerivatives {
  RealVector p;
  RealVector p_dot;
};

inline ProbabilityDerivatives analytic_probability_derivatives(
    const Scenario& s, double theta, const Tolerances& tol = default_tolerances()) {
  const detail::Frame f = detail::make_frame(s, theta, tol);
  ProbabilityDerivatives out{f.dec.probabilities, RealVector(s.dim())};
  // p_dot_k = 2 Re[<psi|k><k|psi_dot>] with psi_dot = -i H psi reduces to 2 Im[conj(a_k) w_k].
  for (int k = 0; k < s.dim(); ++k) out.p_dot(k) = 2.0 * std::imag(std::conj(f.a(k)) * f.w(k));
  return out;
}

// ---------- route 2: tau angles and the Fisher operator ----------

struct TauAngles {
  RealVector tau;              // in (-pi, pi]; 0 where undefined
  std::vector<bool> defined;   // false when r_k or |<k|psi_dot>| is negligible
};

inline TauAngles tau_angles(const PureState& psi_theta, const Vector& psi_dot,
                            const MeasurementBasis& basis,
                            const Tolerances& tol = default_tolerances()) {
  if (psi_theta.dim() != basis.dim() || psi_dot.size() != psi_theta.dim())
    throw std::invalid_argument("tau_angles: dimensions differ");
  const Vector a = basis.kets().adjoint() * psi_theta.amplitudes();
  const Vector v = basis.kets().adjoint() * psi_dot;
  const int dim = basis.dim();
  TauAngles out{RealVector::Zero(dim), std::vector<bool>(dim, false)};
  for (int k = 0; k < dim; ++k) {
    if (std::abs(a(k)) < tol.degenerate_amplitude || std::abs(v(k)) < tol.degenerate_amplitude)
      continue;
    out.tau(k) = detail::wrap_angle(std::arg(v(k)) - std::arg(a(k)));
    out.defined[k] = true;
  }
  return out;
}

class FisherOperator {
 public:
  FisherOperator(RealVector coefficients, MeasurementBasis basis)
      : coefficients_(std::move(coefficients)), basis_(std::move(basis)) {
    if (coefficients_.size() != basis_.dim())
      throw std::invalid_argument("FisherOperator: coefficient count and basis dimension differ");
  }

  const RealVector& coefficients() const { return coefficients_; }
  const MeasurementBasis& basis() const { return basis_; }

  // 4 sum_k c_k |k><k| ; positive semidefinite with spectrum inside [0, 4].
  Matrix matrix() const {
    return basis_.kets() * (4.0 * coefficients_).cast<Complex>().asDiagonal() *
           basis_.kets().adjoint();
  }

 private:
  RealVector coefficients_;
  MeasurementBasis basis_;
};

namespace detail {

// c_k = cos^2 tau_k; where tau_k is undefined the radial limit takes over:
// the squared radial speed tends to |<k|H|psi>|^2 at an amplitude zero, so
// c_k = 1 when that flux is non-negligible, and 0 when amplitude and flux
// both vanish (the outcome contributes nothing).
inline RealVector coefficients_from_frame(const Frame& f, const MeasurementBasis& basis,
                                          const Tolerances& tol) {
  const Vector v = Complex(0.0, -1.0) * f.w;
  const int dim = basis.dim();
  RealVector c(dim);
  const double flux_floor = tol.probability_floor * tol.probability_floor;
  for (int k = 0; k < dim; ++k) {
    const bool defined = std::abs(f.a(k)) >= tol.degenerate_amplitude &&
                         std::abs(v(k)) >= tol.degenerate_amplitude;
    if (defined) {
      const double t = std::cos(wrap_angle(std::arg(v(k)) - std::arg(f.a(k))));
      c(k) = std::min(1.0, t * t);
    } else {
      c(k) = std::norm(f.w(k)) >= flux_floor ? 1.0 : 0.0;
    }
  }
  return c;
}

}  // namespace detail

inline FisherOperator fisher_operator(const Scenario& s, double theta,
                                      const Tolerances& tol = default_tolerances()) {
  const detail::Frame f = detail::make_frame(s, theta, tol);
  return FisherOperator(detail::coefficients_from_frame(f, s.basis, tol), s.basis);
}

// Same coefficients on the kets rotated by exp(+iH theta): the conjugated
// operator exp(+iH theta) F exp(-iH theta) expressed exactly.
inline FisherOperator transformed_fisher_operator(const Scenario& s, double theta,
                                                  const Tolerances& tol = default_tolerances()) {
  FisherOperator f = fisher_operator(s, theta, tol);
  const Spectrum& sp = s.hamiltonian.spectrum();
  Vector phases(s.dim());
  for (int i = 0; i < s.dim(); ++i)
    phases(i) = std::exp(Complex(0.0, sp.eigenvalues(i) * theta));
  const Matrix rotation = sp.eigenvectors * phases.asDiagonal() * sp.eigenvectors.adjoint();
  return FisherOperator(f.coefficients(), MeasurementBasis(rotation * s.basis.kets(), tol));
}

// ---------- route 3: the information complement ----------

struct InformationComplement {
  double k = 0.0;  // sum of a_k^2
  RealVector a;    // radial-tangential decomposition coefficients A_k
};

namespace detail {

// A_k from the matrix-element expansion sum_l |H'_kl| r_l cos(phi_l - phi_k + Omega_kl)
// with H' = U^dag H U. At a degenerate amplitude the limiting phase aligns with
// the velocity, which sends A_k to zero; using that limit keeps <H^2> - K = J/4
// true at amplitude zeros as well.
inline InformationComplement complement_from_frame(const Frame& f, const Matrix& h_in_basis,
                                                   const Tolerances& tol) {
  const int dim = static_cast<int>(f.a.size());
  InformationComplement out;
  out.a = RealVector::Zero(dim);
  std::vector<double> inner;
  inner.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    if (f.dec.degenerate[k]) continue;
    inner.clear();
    for (int l = 0; l < dim; ++l) {
      const Complex h = h_in_basis(k, l);
      if (f.dec.radii(l) == 0.0 || h == Complex(0.0, 0.0)) continue;
      inner.push_back(std::abs(h) * f.dec.radii(l) *
                      std::cos(f.dec.phases(l) - f.dec.phases(k) + std::arg(h)));
    }
    out.a(k) = stable_sum(inner);
  }
  std::vector<double> squares(static_cast<size_t>(dim));
  for (int k = 0; k < dim; ++k) squares[k] = out.a(k) * out.a(k);
  out.k = stable_sum(std::move(squares));
  (void)tol;
  return out;
}

}  // namespace detail

inline InformationComplement information_complement(const Scenario& s, double theta,
                                                    const Tolerances& tol = default_tolerances()) {
  const detail::Frame f = detail::make_frame(s, theta, tol);
  const Matrix h_in_basis = s.basis.kets().adjoint() * s.hamiltonian.matrix() * s.basis.kets();
  return detail::complement_from_frame(f, h_in_basis, tol);
}

// Ratio diagnostic for stationarity of K in the basis phases: at a minimum,
// A_p = r_p B_p with B_p = N_p / D_p wherever the denominator is meaningful.
// The sign of B_p follows this code's phase-velocity orientation (A_k =
// -r_k dphi_k/dtheta); checked by hand at the exact two-level optimum.
// Returns the worst defect, 0 if no denominator reaches 1e-12.
inline double stationarity_residual(const Scenario& s, double theta,
                                    const Tolerances& tol = default_tolerances()) {
  const detail::Frame f = detail::make_frame(s, theta, tol);
  const Matrix h_in_basis = s.basis.kets().adjoint() * s.hamiltonian.matrix() * s.basis.kets();
  const InformationComplement ic = detail::complement_from_frame(f, h_in_basis, tol);
  const int dim = s.dim();
  double worst = 0.0;
  for (int p = 0; p < dim; ++p) {
    double numer = 0.0;
    double denom = 0.0;
    for (int k = 0; k < dim; ++k) {
      const Complex h = h_in_basis(k, p);
      if (h == Complex(0.0, 0.0)) continue;
      const double sine =
          std::sin(f.dec.phases(p) - f.dec.phases(k) + std::arg(h)) * std::abs(h);
      numer += ic.a(k) * sine;
      denom += f.dec.radii(k) * sine;
    }
    if (std::abs(denom) < 1e-12) continue;
    const double b_p = numer / denom;
    worst = std::max(worst, std::abs(ic.a(p) - f.dec.radii(p) * b_p));
  }
  return worst;
}

// ---------- bounds and the consolidated report ----------

// Spectral spread lambda_max - lambda_min.
inline double seminorm(const HermitianOperator& h) {
  return h.max_eigenvalue() - h.min_eigenvalue();
}

inline double expectation(const HermitianOperator& h, const PureState& psi) {
  if (h.dim() != psi.dim()) throw std::invalid_argument("expectation: dimensions differ");
  return std::real(psi.amplitudes().dot(h.matrix() * psi.amplitudes()));
}

// 4 (<H^2> - <H>^2); reachable by the Fisher information only after the
// measurement has been optimized.
inline double variance_bound(const PureState& psi, const HermitianOperator& h) {
  const Vector h_psi = h.matrix() * psi.amplitudes();
  const double h2 = h_psi.squaredNorm();
  const double mean = std::real(psi.amplitudes().dot(h_psi));
  return 4.0 * (h2 - mean * mean);
}

struct OutcomeDiagnostics {
  double r = 0.0;
  double phi = 0.0;
  double tau = 0.0;
  bool tau_defined = false;
  double a = 0.0;
};

struct FisherReport {
  double theta = 0.0;
  double fisher_info = 0.0;     // trace-form J
  double complement = 0.0;      // K
  double h2_expectation = 0.0;  // <H^2>
  double variance_bound = 0.0;  // 4 (<H^2> - <H>^2)
  double seminorm_bound = 0.0;  // (lambda_max - lambda_min)^2
  bool singular_point = false;  // an outcome lost its probability but kept flux
  std::vector<OutcomeDiagnostics> per_outcome;
};

inline FisherReport fisher_report(const Scenario& s, double theta,
                                  const Tolerances& tol = default_tolerances()) {
  const detail::Frame f = detail::make_frame(s, theta, tol);
  const Matrix h_in_basis = s.basis.kets().adjoint() * s.hamiltonian.matrix() * s.basis.kets();
  const RealVector c = detail::coefficients_from_frame(f, s.basis, tol);
  const InformationComplement ic = detail::complement_from_frame(f, h_in_basis, tol);
  const Vector v = Complex(0.0, -1.0) * f.w;
  const int dim = s.dim();

  FisherReport report;
  report.theta = theta;
  std::vector<double> j_terms(static_cast<size_t>(dim));
  for (int k = 0; k < dim; ++k) j_terms[k] = 4.0 * c(k) * std::norm(f.w(k));
  report.fisher_info = detail::stable_sum(std::move(j_terms));
  report.complement = ic.k;
  const Vector h_psi = s.hamiltonian.matrix() * f.psi_theta.amplitudes();
  report.h2_expectation = h_psi.squaredNorm();
  const double mean = std::real(f.psi_theta.amplitudes().dot(h_psi));
  report.variance_bound = 4.0 * (report.h2_expectation - mean * mean);
  const double spread = seminorm(s.hamiltonian);
  report.seminorm_bound = spread * spread;

  const double flux_floor = tol.probability_floor * tol.probability_floor;
  report.per_outcome.resize(static_cast<size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    OutcomeDiagnostics& d = report.per_outcome[static_cast<size_t>(k)];
    d.r = f.dec.radii(k);
    d.phi = f.dec.phases(k);
    d.a = ic.a(k);
    d.tau_defined = std::abs(f.a(k)) >= tol.degenerate_amplitude &&
                    std::abs(v(k)) >= tol.degenerate_amplitude;
    if (d.tau_defined) d.tau = detail::wrap_angle(std::arg(v(k)) - std::arg(f.a(k)));
    if (f.dec.probabilities(k) < tol.probability_floor && std::norm(f.w(k)) >= flux_floor)
      report.singular_point = true;
  }
  return report;
}

}  // namespace fisherop
