#pragma once

// Maximizes the Fisher information over measurement bases (and optionally over
// probes) by minimizing the information complement K with multi-start BFGS on
// an over-parameterized Givens chart of the unitary group.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <fisherop/fisher.hpp>
#include <fisherop/rng.hpp>

namespace fisherop {

// Chart over U(dim): dim(dim-1)/2 rotation angles, dim(dim-1)/2 pair phases
// (interleaved per pair), then dim column phases. Every real parameter vector
// decodes to a unitary; the redundancy (global and column phases move nothing
// the objective sees) is harmless for minimization.
class BasisParameterization {
 public:
  explicit BasisParameterization(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("BasisParameterization: dim must be positive");
  }

  int dim() const { return dim_; }
  int parameter_count() const { return dim_ * dim_; }

  Matrix decode(const RealVector& params) const {
    if (params.size() != parameter_count())
      throw std::invalid_argument("BasisParameterization::decode: expected " +
                                  std::to_string(parameter_count()) + " parameters, got " +
                                  std::to_string(params.size()));
    Matrix u = Matrix::Identity(dim_, dim_);
    int idx = 0;
    for (int p = 0; p < dim_; ++p) {
      for (int q = p + 1; q < dim_; ++q) {
        const double c = std::cos(params(idx));
        const double s = std::sin(params(idx));
        const Complex e = std::polar(1.0, params(idx + 1));
        idx += 2;
        for (int col = 0; col < dim_; ++col) {
          const Complex up = u(p, col);
          const Complex uq = u(q, col);
          u(p, col) = c * up - s * std::conj(e) * uq;
          u(q, col) = s * e * up + c * uq;
        }
      }
    }
    for (int k = 0; k < dim_; ++k) u.col(k) *= std::polar(1.0, params(idx + k));
    return u;
  }

 private:
  int dim_;
};

struct OptimizerConfig {
  int restarts = 32;
  int max_iterations = 2000;
  double k_tolerance = 1e-10;  // convergence: total decrease below this over stall_window steps
  int stall_window = 10;
  double gradient_step = 1e-7;  // central-difference step on the chart
  std::uint64_t seed = 1;
  int warmup_samples = 64;  // random starts screened per restart before BFGS
  std::string method = "multistart-bfgs-central-fd";
};

struct OptimizationResult {
  MeasurementBasis basis;
  PureState probe;
  bool probe_optimized = false;
  double j_achieved = 0.0;
  double k_min = 0.0;
  double variance_bound = 0.0;  // 4 (<H^2> - <H>^2) of the reported probe
  double seminorm_bound = 0.0;  // (lambda_max - lambda_min)^2
  int restarts_used = 0;
  bool converged = false;
  double stationarity_residual = 0.0;
  double extremal_overlap = 0.0;  // squared probe overlap with the extremal eigenspaces
  bool degenerate_extremal = false;
  std::vector<double> objective_trace;  // accepted K values of the winning run
};

namespace detail {

inline void validate_optimizer_config(const OptimizerConfig& config) {
  if (config.restarts < 1)
    throw std::invalid_argument("OptimizerConfig: restarts must be at least 1");
  if (config.max_iterations < 1)
    throw std::invalid_argument("OptimizerConfig: max_iterations must be at least 1");
  if (config.k_tolerance <= 0.0)
    throw std::invalid_argument("OptimizerConfig: k_tolerance must be positive");
  if (config.stall_window < 1)
    throw std::invalid_argument("OptimizerConfig: stall_window must be at least 1");
  if (config.gradient_step <= 0.0)
    throw std::invalid_argument("OptimizerConfig: gradient_step must be positive");
  if (config.warmup_samples < 0)
    throw std::invalid_argument("OptimizerConfig: warmup_samples must be nonnegative");
}

struct SearchRun {
  RealVector params;
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::vector<double> trace;  // objective after each accepted step, start included
};

// BFGS with central-difference gradients and Armijo backtracking. Convergence
// is declared once the total objective decrease over stall_window consecutive
// accepted steps falls below tolerance; a failed line search counts as a full
// stall (no step the chart can take improves the objective by that standard).
inline SearchRun bfgs_minimize(const std::function<double(const RealVector&)>& objective,
                               RealVector x, const OptimizerConfig& config) {
  const Eigen::Index n = x.size();
  const double h = config.gradient_step;
  auto gradient = [&](RealVector point) {
    RealVector g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double saved = point(i);
      point(i) = saved + h;
      const double fp = objective(point);
      point(i) = saved - h;
      const double fm = objective(point);
      point(i) = saved;
      g(i) = (fp - fm) / (2.0 * h);
    }
    return g;
  };

  SearchRun run;
  double fx = objective(x);
  run.trace.push_back(fx);
  RealVector g = gradient(x);
  RealMatrix hinv = RealMatrix::Identity(n, n);
  int stall = 0;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    if (g.norm() == 0.0) {
      run.converged = true;
      break;
    }
    RealVector dir = -(hinv * g);
    double slope = g.dot(dir);
    if (slope >= 0.0) {  // curvature estimate went bad; fall back to steepest descent
      hinv.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    RealVector xnew = x;
    double fnew = fx;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      xnew = x + step * dir;
      fnew = objective(xnew);
      if (fnew <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      run.converged = true;
      break;
    }
    const RealVector gnew = gradient(xnew);
    const RealVector s = xnew - x;
    const RealVector y = gnew - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const RealMatrix id = RealMatrix::Identity(n, n);
      hinv = (id - rho * s * y.transpose()) * hinv * (id - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
    const double decrease = fx - fnew;
    x = std::move(xnew);
    fx = fnew;
    g = gnew;
    run.trace.push_back(fx);
    if (decrease < config.k_tolerance) {
      if (++stall >= config.stall_window) {
        run.converged = true;
        break;
      }
    } else {
      stall = 0;
    }
  }
  run.params = std::move(x);
  run.value = fx;
  return run;
}

// Deterministic multi-start: restart r draws from seed + r, screens
// warmup_samples random points, refines the best by BFGS. Strict less-than
// in the reduction keeps the lowest restart index on ties.
inline SearchRun multistart_minimize(const std::function<double(const RealVector&)>& objective,
                                     int parameter_count, const OptimizerConfig& config) {
  SearchRun best;
  for (int r = 0; r < config.restarts; ++r) {
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(r));
    RealVector start(parameter_count);
    double start_value = std::numeric_limits<double>::infinity();
    const int draws = std::max(1, config.warmup_samples);
    for (int s = 0; s < draws; ++s) {
      RealVector candidate(parameter_count);
      for (int i = 0; i < parameter_count; ++i) candidate(i) = uniform_in(rng, 0.0, 2.0 * kPi);
      const double value = objective(candidate);
      if (value < start_value) {
        start_value = value;
        start = std::move(candidate);
      }
    }
    SearchRun run = bfgs_minimize(objective, std::move(start), config);
    if (run.value < best.value) best = std::move(run);
  }
  return best;
}

// K for the centered Hamiltonian given precomputed <k|psi_theta> and
// <k|Hc|psi_theta>: A_k = Re[conj(a_k) w_k] / r_k, zero in the amplitude-zero
// limit (the limiting phase aligns with the velocity there). Plain sums: this
// is the optimizer's hot loop, reported numbers come from fisher_report.
inline double complement_objective(const Vector& a, const Vector& w, double amplitude_floor) {
  double k_total = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double r = std::abs(a(k));
    if (r < amplitude_floor) continue;
    const double a_k = std::real(std::conj(a(k)) * w(k)) / r;
    k_total += a_k * a_k;
  }
  return k_total;
}

// Squared overlap of the probe with the eigenspaces of the smallest and the
// largest eigenvalue; flags when either extremal eigenvalue is degenerate.
inline std::pair<double, bool> extremal_overlap(const HermitianOperator& h,
                                                const PureState& probe) {
  const Spectrum& sp = h.spectrum();
  const int dim = h.dim();
  const double scale = std::max({1.0, std::abs(h.min_eigenvalue()), std::abs(h.max_eigenvalue())});
  const double gap = 1e-9 * scale;
  double overlap = 0.0;
  int extremal_count = 0;
  for (int i = 0; i < dim; ++i) {
    const bool low = sp.eigenvalues(i) - h.min_eigenvalue() < gap;
    const bool high = h.max_eigenvalue() - sp.eigenvalues(i) < gap;
    if (!low && !high) continue;
    ++extremal_count;
    overlap += std::norm(sp.eigenvectors.col(i).dot(probe.amplitudes()));
  }
  return {overlap, extremal_count > 2};
}

inline OptimizationResult finish_result(const HermitianOperator& h, const PureState& probe,
                                        MeasurementBasis basis, double theta, bool probe_optimized,
                                        const OptimizerConfig& config, const SearchRun& run,
                                        double trace_offset, const Tolerances& tol) {
  Scenario scenario(h, probe, std::move(basis));
  const FisherReport report = fisher_report(scenario, theta, tol);
  const auto [overlap, degenerate] = extremal_overlap(h, probe);
  const double residual = stationarity_residual(scenario, theta, tol);
  OptimizationResult out{std::move(scenario.basis),
                         probe,
                         probe_optimized,
                         report.fisher_info,
                         report.complement,
                         report.variance_bound,
                         report.seminorm_bound,
                         config.restarts,
                         run.converged,
                         residual,
                         overlap,
                         degenerate,
                         {}};
  out.objective_trace.reserve(run.trace.size());
  for (double value : run.trace) out.objective_trace.push_back(value + trace_offset);
  return out;
}

}  // namespace detail

// Minimizes K over measurement bases for a fixed probe; j_achieved is then
// 4(<H^2> - K_min). The search works with the spectrally centered Hamiltonian
// (same minimizer, J is shift invariant) to keep cancellation out of the A_k
// sums, and reports everything against the original H.
inline OptimizationResult optimize_measurement(const PureState& probe, const HermitianOperator& h,
                                               double theta, const OptimizerConfig& config = {},
                                               const Tolerances& tol = default_tolerances()) {
  if (h.dim() != probe.dim())
    throw std::invalid_argument("optimize_measurement: probe and H dimensions differ");
  detail::validate_optimizer_config(config);
  const int dim = h.dim();
  const double mid = 0.5 * (h.min_eigenvalue() + h.max_eigenvalue());

  const PureState psi_theta = evolve(probe, h, theta);
  const Vector psi = psi_theta.amplitudes();
  const Vector hc_psi = h.matrix() * psi - mid * psi;

  const BasisParameterization chart(dim);
  const double floor = tol.degenerate_amplitude;
  auto objective = [&](const RealVector& params) {
    const Matrix u = chart.decode(params);
    const Vector a = u.adjoint() * psi;
    const Vector w = u.adjoint() * hc_psi;
    return detail::complement_objective(a, w, floor);
  };

  const detail::SearchRun run =
      detail::multistart_minimize(objective, chart.parameter_count(), config);
  // K(H) differs from the centered objective by <H^2> - <Hc^2>, a constant here.
  const double offset = (h.matrix() * psi).squaredNorm() - hc_psi.squaredNorm();
  return detail::finish_result(h, probe, MeasurementBasis(chart.decode(run.params), tol), theta,
                               false, config, run, offset, tol);
}

// Joint search over probes (2 dim reals, normalized) and bases; the objective
// is K - <Hc^2> = -J/4 up to the spectral shift, so the optimum closes the
// seminorm bound J = (lambda_max - lambda_min)^2.
inline OptimizationResult optimize_probe_and_measurement(
    const HermitianOperator& h, double theta, const OptimizerConfig& config = {},
    const Tolerances& tol = default_tolerances()) {
  detail::validate_optimizer_config(config);
  const int dim = h.dim();
  const double mid = 0.5 * (h.min_eigenvalue() + h.max_eigenvalue());
  const Spectrum& sp = h.spectrum();

  const BasisParameterization chart(dim);
  const int basis_params = chart.parameter_count();
  const int total_params = basis_params + 2 * dim;

  auto decode_probe = [&](const RealVector& params) {
    Vector raw(dim);
    for (int i = 0; i < dim; ++i)
      raw(i) = Complex(params(basis_params + 2 * i), params(basis_params + 2 * i + 1));
    return raw;
  };

  const double floor = tol.degenerate_amplitude;
  auto objective = [&](const RealVector& params) {
    Vector raw = decode_probe(params);
    const double norm = raw.norm();
    if (norm < 1e-8) return 0.0;  // worse than any state: -J/4 <= 0 everywhere
    raw /= norm;
    // evolve through the cached spectrum, then center
    const Vector modes = sp.eigenvectors.adjoint() * raw;
    Vector psi(dim);
    for (int i = 0; i < dim; ++i)
      psi(i) = modes(i) * std::exp(Complex(0.0, -sp.eigenvalues(i) * theta));
    psi = sp.eigenvectors * psi;
    const Vector hc_psi = h.matrix() * psi - mid * psi;
    const Matrix u = chart.decode(params.head(basis_params));
    const Vector a = u.adjoint() * psi;
    const Vector w = u.adjoint() * hc_psi;
    return detail::complement_objective(a, w, floor) - hc_psi.squaredNorm();
  };

  const detail::SearchRun run = detail::multistart_minimize(objective, total_params, config);
  Vector raw = decode_probe(run.params);
  if (raw.norm() < 1e-8)
    throw std::runtime_error("optimize_probe_and_measurement: search collapsed to the zero probe");
  const PureState probe = PureState::normalized(std::move(raw));
  // trace values are K - <Hc^2> at the evolving probe; shift by the final
  // probe's <H^2> so the trace reads as the complement against H.
  const PureState psi_theta = evolve(probe, h, theta);
  const double offset = (h.matrix() * psi_theta.amplitudes()).squaredNorm();
  return detail::finish_result(h, probe, MeasurementBasis(chart.decode(run.params.head(basis_params)), tol),
                               theta, true, config, run, offset, tol);
}

}  // namespace fisherop
