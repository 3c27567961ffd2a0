#include <fisherop/estimation.hpp>
#include <fisherop/rng.hpp>
#include <fisherop/su2.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <random>

using namespace fisherop;

namespace {

// H = diag(-1/2, 1/2), probe (1,1)/sqrt2, x basis: p = (cos^2, sin^2)(theta/2),
// J = 1 at every theta. The two-outcome likelihood has the closed-form MLE
// theta_hat = 2 arccos(sqrt(n0/N)) on (0, pi).
Scenario half_spin_x_scenario() {
  Matrix h(2, 2);
  h << Complex(-0.5, 0), Complex(0, 0), Complex(0, 0), Complex(0.5, 0);
  Vector probe(2);
  probe << Complex(1, 0), Complex(1, 0);
  Matrix kets(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  kets << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
  return Scenario(HermitianOperator(h), PureState::normalized(probe), MeasurementBasis(kets));
}

Scenario noon_jz_scenario(double j) {
  const SpinSystem sys = spin_operators(j);
  return Scenario(sys.jy, noon_state(sys), MeasurementBasis::computational(sys.dim));
}

}  // namespace

TEST_CASE("sample_outcomes: deterministic distributions land on one outcome") {
  Matrix h(2, 2);
  h << Complex(0.3, 0), Complex(0, 0), Complex(0, 0), Complex(1.7, 0);
  Vector probe(2);
  probe << Complex(1, 0), Complex(0, 0);
  const Scenario s(HermitianOperator(h), PureState(probe), MeasurementBasis::computational(2));
  std::mt19937_64 rng(7);
  const std::vector<long> counts = sample_outcomes(s, 0.9, 500, rng);
  REQUIRE(counts[0] == 500);
  REQUIRE(counts[1] == 0);
}

TEST_CASE("sample_outcomes: counts sum to N and are seed-reproducible") {
  std::mt19937_64 gen(11);
  const Scenario s(random_hermitian(4, gen), random_pure_state(4, gen), random_basis(4, gen));
  std::mt19937_64 rng_a(123), rng_b(123);
  const std::vector<long> a = sample_outcomes(s, 0.37, 2000, rng_a);
  const std::vector<long> b = sample_outcomes(s, 0.37, 2000, rng_b);
  long total = 0;
  for (long c : a) total += c;
  REQUIRE(total == 2000);
  REQUIRE(a == b);
}

TEST_CASE("sample_outcomes: chi-square agreement with the exact distribution") {
  std::mt19937_64 gen(13);
  const Scenario s(random_hermitian(4, gen), random_pure_state(4, gen), random_basis(4, gen));
  const double theta = 0.61;
  const RealVector p = outcome_probabilities(s, theta);
  REQUIRE(p.minCoeff() > 1e-3);  // chi-square approximation needs populated cells

  const long n = 100000;
  std::mt19937_64 rng(29);
  const std::vector<long> counts = sample_outcomes(s, theta, n, rng);
  double chi2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double expected = static_cast<double>(n) * p(k);
    const double delta = static_cast<double>(counts[static_cast<size_t>(k)]) - expected;
    chi2 += delta * delta / expected;
  }
  REQUIRE(chi2 < 16.266);  // df = 3 critical value at the 1e-3 level
}

TEST_CASE("mle_estimate recovers theta from noiseless counts") {
  const Scenario s = half_spin_x_scenario();
  const double truth = 1.1;
  const long n = 1000000;
  const double p0 = std::cos(truth / 2.0) * std::cos(truth / 2.0);
  const std::vector<long> counts = {std::lround(n * p0), n - std::lround(n * p0)};
  const MleResult mle = mle_estimate(s, counts, EstimationWindow{0.2, 2.9});
  REQUIRE_FALSE(mle.boundary);
  REQUIRE(mle.theta_hat == Catch::Approx(truth).margin(1e-5));
}

TEST_CASE("mle_estimate matches the two-outcome closed form") {
  const Scenario s = half_spin_x_scenario();
  std::mt19937_64 rng(31);
  const std::vector<long> counts = sample_outcomes(s, 1.1, 5000, rng);
  const double closed_form =
      2.0 * std::acos(std::sqrt(static_cast<double>(counts[0]) / 5000.0));
  const MleResult mle = mle_estimate(s, counts, EstimationWindow{0.2, 2.9});
  REQUIRE(mle.theta_hat == Catch::Approx(closed_form).margin(1e-6));
}

TEST_CASE("mle_estimate pins to the boundary when the window excludes the truth") {
  const Scenario s = half_spin_x_scenario();
  std::mt19937_64 rng(37);
  const std::vector<long> counts = sample_outcomes(s, 1.1, 5000, rng);
  const MleResult mle = mle_estimate(s, counts, EstimationWindow{1.5, 2.5});
  REQUIRE(mle.boundary);
  REQUIRE(mle.theta_hat < 1.51);
}

TEST_CASE("mle_estimate flags the probability floor when an observed outcome dies") {
  const Scenario s = half_spin_x_scenario();
  // window chosen so the 256-point grid lands exactly on theta = 0, where
  // p_1 = sin^2(0) = 0 yet outcome 1 was observed twice
  const EstimationWindow window{-128.0 / 255.0, 127.0 / 255.0};
  const std::vector<long> counts = {98, 2};
  const MleResult mle = mle_estimate(s, counts, window);
  REQUIRE(mle.floored);
  // the likelihood is even in theta here, so the window holds twin peaks
  const double closed_form = 2.0 * std::asin(std::sqrt(0.02));
  REQUIRE(std::abs(mle.theta_hat) == Catch::Approx(closed_form).margin(1e-3));
}

TEST_CASE("mle_estimate rejects flat likelihoods and bad inputs") {
  std::mt19937_64 gen(41);
  const HermitianOperator h = random_hermitian(3, gen);
  const PureState eigenstate(h.spectrum().eigenvectors.col(0));
  const Scenario s(h, eigenstate, MeasurementBasis::computational(3));
  std::mt19937_64 rng(43);
  const std::vector<long> counts = sample_outcomes(s, 0.5, 1000, rng);
  REQUIRE_THROWS_AS(mle_estimate(s, counts, EstimationWindow{0.0, 1.0}), no_information_error);

  const Scenario good = half_spin_x_scenario();
  REQUIRE_THROWS_AS(mle_estimate(good, {10, 20, 30}, EstimationWindow{0.0, 1.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(mle_estimate(good, {0, 0}, EstimationWindow{0.0, 1.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(mle_estimate(good, {10, 20}, EstimationWindow{1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("experiment validation: counts, trials, window interiority") {
  const Scenario s = half_spin_x_scenario();
  REQUIRE_THROWS_AS(EstimationExperiment(s, 1.1, 0, 10, 1, EstimationWindow{0.2, 2.9}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(EstimationExperiment(s, 1.1, 100, 0, 1, EstimationWindow{0.2, 2.9}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(EstimationExperiment(s, 3.5, 100, 10, 1, EstimationWindow{0.2, 2.9}),
                    std::invalid_argument);
  const EstimationExperiment ok = EstimationExperiment::with_default_window(s, 1.1, 100, 10, 1);
  REQUIRE(ok.window.lo == Catch::Approx(1.1 - kPi / 2.0));
  REQUIRE(ok.window.hi == Catch::Approx(1.1 + kPi / 2.0));
  REQUIRE_THROWS_AS(default_window(HermitianOperator(Matrix::Identity(2, 2)), 0.0),
                    no_information_error);
}

TEST_CASE("cramer_rao_check sits in the expected band for the optimal qubit") {
  const Scenario s = half_spin_x_scenario();
  const EstimationExperiment exp(s, 1.1, 10000, 200, 2024, EstimationWindow{0.2, 2.9});
  const CramerRaoReport report = cramer_rao_check(exp);
  REQUIRE(report.j_true == Catch::Approx(1.0).epsilon(1e-10));
  REQUIRE(report.bound == Catch::Approx(1e-4).epsilon(1e-10));
  REQUIRE(report.checked);
  REQUIRE(report.boundary_hits == 0);
  const double floor = 1.0 - 3.0 / std::sqrt(200.0);
  REQUIRE(report.ratio >= floor);
  REQUIRE(report.ratio <= 1.3);
  REQUIRE(report.floor_satisfied);
  REQUIRE(report.ceiling_satisfied);
  REQUIRE(std::abs(report.bias) < 3e-3);  // MLE bias at N = 1e4 is far below the noise floor
}

TEST_CASE("cramer_rao_check matches the Heisenberg bound for a j = 2 NOON probe") {
  const Scenario s = noon_jz_scenario(2.0);
  // one fringe of the n = 4 oscillation; the default window spans aliases
  const EstimationExperiment exp(s, 0.4, 10000, 200, 77, EstimationWindow{0.32, 0.48});
  const CramerRaoReport report = cramer_rao_check(exp);
  REQUIRE(report.j_true == Catch::Approx(16.0).epsilon(1e-8));
  REQUIRE(report.checked);
  const double floor = 1.0 - 3.0 / std::sqrt(200.0);
  REQUIRE(report.ratio >= floor);
  REQUIRE(report.ratio <= 1.3);
}

TEST_CASE("single-trial reports skip the statistical assertions") {
  const Scenario s = half_spin_x_scenario();
  const EstimationExperiment exp(s, 1.1, 500, 1, 5, EstimationWindow{0.2, 2.9});
  const CramerRaoReport report = cramer_rao_check(exp);
  REQUIRE_FALSE(report.checked);
  REQUIRE(report.floor_satisfied);
  REQUIRE(report.ceiling_satisfied);
  REQUIRE(report.t == 1);
}

TEST_CASE("doubling N halves the empirical variance within tolerance") {
  const Scenario s = half_spin_x_scenario();
  const EstimationExperiment small(s, 1.1, 2000, 400, 99, EstimationWindow{0.2, 2.9});
  const EstimationExperiment large(s, 1.1, 4000, 400, 99, EstimationWindow{0.2, 2.9});
  const double v_small = cramer_rao_check(small).empirical_variance;
  const double v_large = cramer_rao_check(large).empirical_variance;
  const double shrink = v_large / v_small;
  REQUIRE(shrink > 0.4);
  REQUIRE(shrink < 0.6);
}

TEST_CASE("cramer_rao_check is deterministic and rejects zero-information scenarios") {
  const Scenario s = half_spin_x_scenario();
  const EstimationExperiment exp(s, 1.1, 1000, 20, 17, EstimationWindow{0.2, 2.9});
  const CramerRaoReport a = cramer_rao_check(exp);
  const CramerRaoReport b = cramer_rao_check(exp);
  REQUIRE(std::memcmp(&a.empirical_variance, &b.empirical_variance, sizeof(double)) == 0);
  REQUIRE(std::memcmp(&a.bias, &b.bias, sizeof(double)) == 0);

  std::mt19937_64 gen(53);
  const HermitianOperator h = random_hermitian(2, gen);
  const Scenario dead(h, PureState(h.spectrum().eigenvectors.col(0)),
                      MeasurementBasis::computational(2));
  REQUIRE_THROWS_AS(
      cramer_rao_check(EstimationExperiment(dead, 0.5, 100, 5, 1, EstimationWindow{0.0, 1.0})),
      no_information_error);
}
