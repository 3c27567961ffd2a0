#pragma once

// Monte-Carlo demonstration of the Cramer-Rao bound: sample outcomes from the
// exact distribution, estimate theta by grid + golden-section maximum
// likelihood, and compare the mean squared error with 1/(N J).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <fisherop/fisher.hpp>
#include <fisherop/rng.hpp>

namespace fisherop {

inline RealVector outcome_probabilities(const Scenario& s, double theta,
                                        const Tolerances& tol = default_tolerances()) {
  return decompose(evolve(s.probe, s.hamiltonian, theta), s.basis, tol).probabilities;
}

struct EstimationWindow {
  double lo = 0.0;
  double hi = 0.0;
};

// One interference fringe around the true value; oscillatory distributions
// alias the likelihood outside of it, so wider windows are the caller's risk.
inline EstimationWindow default_window(const HermitianOperator& h, double true_theta) {
  const double spread = seminorm(h);
  if (spread <= 0.0)
    throw no_information_error("default_window: Hamiltonian spectrum has zero spread");
  const double half = kPi / (2.0 * spread);
  return EstimationWindow{true_theta - half, true_theta + half};
}

struct EstimationExperiment {
  Scenario scenario;
  double true_theta;
  long samples_per_trial;  // N
  int trials;              // T
  std::uint64_t seed;
  EstimationWindow window;

  EstimationExperiment(Scenario s, double theta, long n, int t, std::uint64_t rng_seed,
                       EstimationWindow w)
      : scenario(std::move(s)),
        true_theta(theta),
        samples_per_trial(n),
        trials(t),
        seed(rng_seed),
        window(w) {
    if (samples_per_trial < 1)
      throw std::invalid_argument("EstimationExperiment: samples_per_trial must be at least 1");
    if (trials < 1) throw std::invalid_argument("EstimationExperiment: trials must be at least 1");
    if (!(window.lo < true_theta && true_theta < window.hi))
      throw std::invalid_argument("EstimationExperiment: true_theta must be interior to the window");
  }

  static EstimationExperiment with_default_window(Scenario s, double theta, long n, int t,
                                                  std::uint64_t rng_seed) {
    const EstimationWindow w = default_window(s.hamiltonian, theta);
    return EstimationExperiment(std::move(s), theta, n, t, rng_seed, w);
  }
};

// Inverse-CDF sampling on the outcome index; counts sum to n.
inline std::vector<long> sample_outcomes(const Scenario& s, double theta, long n,
                                         std::mt19937_64& rng,
                                         const Tolerances& tol = default_tolerances()) {
  if (n < 1) throw std::invalid_argument("sample_outcomes: sample count must be at least 1");
  const RealVector p = outcome_probabilities(s, theta, tol);
  const int dim = s.dim();
  std::vector<long> counts(static_cast<size_t>(dim), 0);
  for (long i = 0; i < n; ++i) {
    const double u = uniform_double(rng);
    double cdf = 0.0;
    int k = dim - 1;  // guard against rounding in the cumulative sum
    for (int j = 0; j < dim; ++j) {
      cdf += p(j);
      if (u < cdf) {
        k = j;
        break;
      }
    }
    ++counts[static_cast<size_t>(k)];
  }
  return counts;
}

struct MleResult {
  double theta_hat = 0.0;
  bool floored = false;   // an observed outcome hit the probability floor
  bool boundary = false;  // likelihood peaked at a window edge
};

namespace detail {

inline double log_likelihood(const Scenario& s, const std::vector<long>& counts, double theta,
                             double floor, bool* floored, const Tolerances& tol) {
  const RealVector p = outcome_probabilities(s, theta, tol);
  double total = 0.0;
  for (int k = 0; k < s.dim(); ++k) {
    const long c = counts[static_cast<size_t>(k)];
    if (c == 0) continue;
    if (p(k) < floor) {
      *floored = true;
      total += static_cast<double>(c) * std::log(floor);
    } else {
      total += static_cast<double>(c) * std::log(p(k));
    }
  }
  return total;
}

}  // namespace detail

// Maximizes sum_k counts_k ln p_k(theta) on a 256-point grid over the window,
// then refines the peak by golden-section search in the bracketing cell pair.
inline MleResult mle_estimate(const Scenario& s, const std::vector<long>& counts,
                              const EstimationWindow& window,
                              const Tolerances& tol = default_tolerances()) {
  if (static_cast<int>(counts.size()) != s.dim())
    throw std::invalid_argument("mle_estimate: counts length and scenario dimension differ");
  if (!(window.lo < window.hi))
    throw std::invalid_argument("mle_estimate: window is empty");
  long total = 0;
  for (long c : counts) {
    if (c < 0) throw std::invalid_argument("mle_estimate: negative count");
    total += c;
  }
  if (total == 0) throw std::invalid_argument("mle_estimate: no outcomes recorded");

  MleResult out;
  const double floor = tol.probability_floor;
  auto loglik = [&](double theta) {
    return detail::log_likelihood(s, counts, theta, floor, &out.floored, tol);
  };

  constexpr int kGridPoints = 256;
  const double step = (window.hi - window.lo) / (kGridPoints - 1);
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  double worst_value = std::numeric_limits<double>::infinity();
  std::vector<double> values(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    values[static_cast<size_t>(i)] = loglik(window.lo + step * i);
    if (values[static_cast<size_t>(i)] > best_value) {
      best_value = values[static_cast<size_t>(i)];
      best = i;
    }
    worst_value = std::min(worst_value, values[static_cast<size_t>(i)]);
  }
  if (best_value - worst_value <= 1e-9 * std::max(1.0, std::abs(best_value)))
    throw no_information_error("mle_estimate: likelihood is flat across the window");

  out.boundary = (best == 0 || best == kGridPoints - 1);
  double lo = window.lo + step * std::max(0, best - 1);
  double hi = window.lo + step * std::min(kGridPoints - 1, best + 1);
  // golden-section maximization
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = loglik(x1);
  double f2 = loglik(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = loglik(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = loglik(x1);
    }
  }
  out.theta_hat = 0.5 * (lo + hi);
  return out;
}

struct CramerRaoReport {
  long n = 0;
  int t = 0;
  double j_true = 0.0;
  double bound = 0.0;               // 1/(N J)
  double empirical_variance = 0.0;  // mean squared error about the true theta
  double ratio = 0.0;               // empirical_variance / bound
  double bias = 0.0;
  bool checked = false;          // false when T == 1: too few trials to judge
  bool floor_satisfied = true;   // ratio >= 1 - 3/sqrt(T)
  bool ceiling_satisfied = true; // ratio <= 1.3, judged only when N >= 1e4
  int boundary_hits = 0;         // trials whose estimate pinned to a window edge
};

inline CramerRaoReport cramer_rao_check(const EstimationExperiment& exp,
                                        const Tolerances& tol = default_tolerances()) {
  const FisherReport fisher = fisher_report(exp.scenario, exp.true_theta, tol);
  if (fisher.singular_point || !(fisher.fisher_info > 0.0) || !std::isfinite(fisher.fisher_info))
    throw no_information_error("cramer_rao_check: no usable information at the true parameter");

  CramerRaoReport report;
  report.n = exp.samples_per_trial;
  report.t = exp.trials;
  report.j_true = fisher.fisher_info;
  report.bound = 1.0 / (static_cast<double>(exp.samples_per_trial) * fisher.fisher_info);

  std::vector<double> errors(static_cast<size_t>(exp.trials));
  for (int trial = 0; trial < exp.trials; ++trial) {
    std::mt19937_64 rng(exp.seed + static_cast<std::uint64_t>(trial));
    const std::vector<long> counts =
        sample_outcomes(exp.scenario, exp.true_theta, exp.samples_per_trial, rng, tol);
    const MleResult mle = mle_estimate(exp.scenario, counts, exp.window, tol);
    if (mle.boundary) ++report.boundary_hits;
    errors[static_cast<size_t>(trial)] = mle.theta_hat - exp.true_theta;
  }
  std::vector<double> squares(errors.size());
  for (size_t i = 0; i < errors.size(); ++i) squares[i] = errors[i] * errors[i];
  report.empirical_variance = detail::stable_sum(std::move(squares)) / exp.trials;
  report.bias = detail::stable_sum(std::move(errors)) / exp.trials;
  report.ratio = report.empirical_variance / report.bound;

  report.checked = exp.trials > 1;
  if (report.checked) {
    report.floor_satisfied = report.ratio >= 1.0 - 3.0 / std::sqrt(static_cast<double>(exp.trials));
    if (exp.samples_per_trial >= 10000) report.ceiling_satisfied = report.ratio <= 1.3;
  }
  return report;
}

}  // namespace fisherop
