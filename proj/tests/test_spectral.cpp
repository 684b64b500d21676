#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "mclt/spectral.hpp"
#include "support/corpus.hpp"

using namespace mclt;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> symmetric_grid(double half_width, double step) {
  std::vector<double> grid;
  long long half = static_cast<long long>(std::llround(half_width / step));
  for (long long k = -half; k <= half; ++k) {
    grid.push_back(static_cast<double>(k) * step);
  }
  return grid;
}
}  // namespace

TEST_CASE("q_operator at t=0 equals P") {
  MarkovChain chain = testing::four_state_mix();
  CharOperator q = q_operator(chain, 0.0);
  for (int i = 0; i < chain.size(); ++i) {
    for (int j = 0; j < chain.size(); ++j) {
      CHECK(q.entries(i, j).real() == Approx(chain.transition()(i, j)).epsilon(1e-15));
      CHECK(q.entries(i, j).imag() == 0.0);
    }
  }
}

TEST_CASE("coin at t=pi gives -P") {
  MarkovChain chain = testing::pm1_coin();
  CharOperator q = q_operator(chain, kPi);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(q.entries(i, j).real() == Approx(-0.5).epsilon(1e-12));
      CHECK(std::abs(q.entries(i, j).imag()) < 1e-12);
    }
  }
}

TEST_CASE("row-wise modulus sums equal 1 for any t") {
  MarkovChain chain = testing::four_state_mix();
  for (double t : {0.3, 1.7, 2.9, -0.4}) {
    CharOperator q = q_operator(chain, t);
    for (int i = 0; i < chain.size(); ++i) {
      double sum = 0.0;
      for (int j = 0; j < chain.size(); ++j) sum += std::abs(q.entries(i, j));
      CHECK(sum == Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("spectral radius") {
  SUBCASE("Q(0) of a stochastic matrix has radius 1") {
    for (const MarkovChain& chain : {testing::pm1_coin(), testing::three_state_cycle()}) {
      CHECK(spectral_radius(q_operator(chain, 0.0)) == Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("coin at pi keeps radius 1") {
    CHECK(spectral_radius(q_operator(testing::pm1_coin(), kPi)) == Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("all-zero matrix has radius 0") {
    CharOperator zero;
    zero.t = 0.0;
    zero.entries = Eigen::MatrixXcd::Zero(3, 3);
    CHECK(spectral_radius(zero) == 0.0);
  }
  SUBCASE("rho(Q(t)) <= 1 everywhere") {
    for (const MarkovChain& chain :
         {testing::pm1_coin(), testing::three_state_cycle(), testing::four_state_mix()}) {
      for (double t = -3.1; t <= 3.1; t += 0.37) {
        CHECK(spectral_radius(q_operator(chain, t)) <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("leading eigen curve") {
  SUBCASE("anchored at the Perron structure") {
    MarkovChain chain = testing::three_state_cycle();
    EigenCurve curve = leading_eigen_curve(chain, symmetric_grid(0.5, 0.01));
    const auto& at0 = curve.samples[curve.samples.size() / 2];
    CHECK(at0.t == 0.0);
    CHECK(std::abs(at0.lambda - 1.0) < 1e-10);
    CHECK(at0.gap > 0.0);
    CHECK(at0.proj_deviation < 1e-10);
  }
  SUBCASE("coin tracks lambda(t) = cos t across the whole window") {
    MarkovChain chain = testing::pm1_coin();
    EigenCurve curve = leading_eigen_curve(chain, symmetric_grid(kPi - 0.01, 0.005));
    for (const auto& s : curve.samples) {
      CHECK(std::abs(s.lambda - std::cos(s.t)) < 1e-9);
    }
  }
  SUBCASE("conjugate symmetry on symmetric grids") {
    MarkovChain chain = testing::four_state_mix();
    EigenCurve curve = leading_eigen_curve(chain, symmetric_grid(1.0, 0.01));
    size_t m = curve.samples.size();
    for (size_t i = 0; i < m; ++i) {
      const auto& left = curve.samples[i];
      const auto& right = curve.samples[m - 1 - i];
      CHECK(std::abs(left.lambda - std::conj(right.lambda)) < 1e-9);
    }
  }
  SUBCASE("grid must contain zero") {
    CHECK_THROWS_AS(leading_eigen_curve(testing::pm1_coin(), {0.1, 0.2}), Error);
  }
}

TEST_CASE("sigma squared") {
  SUBCASE("coin gives 1 by every method") {
    MarkovChain chain = testing::pm1_coin();
    CHECK(sigma_squared(chain, SigmaMethod::curvature) == Approx(1.0).epsilon(1e-6));
    CHECK(sigma_squared(chain, SigmaMethod::autocovariance) == Approx(1.0).epsilon(1e-12));
    CHECK(sigma_squared(chain, SigmaMethod::monte_carlo) == Approx(1.0).epsilon(0.02));
  }
  SUBCASE("iid uniform on {-1,0,1} gives 2/3") {
    MarkovChain chain = testing::iid_uniform3();
    CHECK(sigma_squared(chain, SigmaMethod::curvature) == Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(sigma_squared(chain, SigmaMethod::autocovariance) == Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("single state 0 is degenerate") {
    CHECK_THROWS_WITH_AS(sigma_squared(testing::constant_zero(), SigmaMethod::autocovariance),
                         doctest::Contains("Degenerate"), Error);
  }
  SUBCASE("drifting chain is rejected") {
    Eigen::MatrixXd P(2, 2);
    P << 0.9, 0.1, 0.5, 0.5;
    Eigen::VectorXd mu(2);
    mu << 0.5, 0.5;
    MarkovChain chain = validate_chain({-1, 1}, P, mu);
    CHECK_THROWS_WITH_AS(sigma_squared(chain, SigmaMethod::curvature),
                         doctest::Contains("NotCentered"), Error);
  }
  SUBCASE("methods agree within 2 percent on centered corpus chains") {
    for (const MarkovChain& chain :
         {testing::three_state_cycle(), testing::four_state_mix(), testing::iid_uniform3()}) {
      double curv = sigma_squared(chain, SigmaMethod::curvature);
      double acov = sigma_squared(chain, SigmaMethod::autocovariance);
      double mc = sigma_squared(chain, SigmaMethod::monte_carlo);
      CHECK(std::abs(curv - acov) / acov < 1e-5);
      CHECK(std::abs(mc - acov) / acov < 0.02);
    }
  }
}

TEST_CASE("quadratic expansion of the leading eigenvalue near zero") {
  // 1 - Re lambda(t) ~ sigma^2 t^2 / 2 with relative error <= 1e-3 on
  // |t| <= 0.05 for strongly aperiodic centered chains.
  for (const MarkovChain& chain :
       {testing::three_state_cycle(), testing::four_state_mix(), testing::iid_uniform3()}) {
    double s2 = sigma_squared(chain, SigmaMethod::autocovariance);
    EigenCurve curve = leading_eigen_curve(chain, symmetric_grid(0.05, 0.005));
    for (const auto& s : curve.samples) {
      if (s.t == 0.0) continue;
      double expected = 0.5 * s2 * s.t * s.t;
      CHECK(std::abs((1.0 - s.lambda.real()) - expected) <= 1e-3 * expected);
    }
  }
}

TEST_CASE("projection deviation is O(|t|) near zero") {
  for (const MarkovChain& chain : {testing::three_state_cycle(), testing::four_state_mix()}) {
    EigenCurve curve = leading_eigen_curve(chain, symmetric_grid(0.1, 0.005));
    double k_emp = 0.0;
    for (const auto& s : curve.samples) {
      if (s.t == 0.0) continue;
      k_emp = std::max(k_emp, s.proj_deviation / std::abs(s.t));
    }
    CHECK(k_emp > 0.0);
    CHECK(k_emp < 100.0);  // finite slope bound, reported per chain
    MESSAGE("proj deviation slope bound K = ", k_emp);
  }
}

TEST_CASE("phase periodicity: rho(Q(t + 2pi/g)) = rho(Q(t))") {
  MarkovChain even = testing::even_labels();  // gcd of labels = 2
  for (double t : {0.2, 0.9, 2.2}) {
    CHECK(spectral_radius(q_operator(even, t + kPi)) ==
          Approx(spectral_radius(q_operator(even, t))).epsilon(1e-10));
  }
  MarkovChain coin = testing::pm1_coin();  // gcd 1: period 2pi
  for (double t : {0.2, 0.9}) {
    CHECK(spectral_radius(q_operator(coin, t + 2 * kPi)) ==
          Approx(spectral_radius(q_operator(coin, t))).epsilon(1e-10));
  }
}

TEST_CASE("verify_peripheral_eigenvector") {
  Eigen::VectorXcd ones(2);
  ones << 1.0, 1.0;
  CHECK(verify_peripheral_eigenvector(ones));
  Eigen::VectorXcd skew(2);
  skew << 1.0, 0.5;
  CHECK_FALSE(verify_peripheral_eigenvector(skew));
  Eigen::VectorXcd phases(3);
  phases << std::polar(1.0, 0.3), std::polar(1.0, -2.0), std::polar(1.0, 1.1);
  CHECK(verify_peripheral_eigenvector(phases));
}

TEST_CASE("numeric aperiodicity scan") {
  SUBCASE("coin fails with witness at pi") {
    AperiodicityReport rep = strong_aperiodicity_numeric(testing::pm1_coin(), 0.1);
    CHECK_FALSE(rep.is_strongly_aperiodic);
    REQUIRE(rep.witness_t.has_value());
    CHECK(*rep.witness_t == Approx(kPi).epsilon(1e-9));
    CHECK(std::abs(*rep.witness_lambda - std::complex<double>(-1.0, 0.0)) < 1e-8);
    CHECK(verify_peripheral_eigenvector(*rep.witness_phi));
    CHECK(std::abs(rep.sup_radius - 1.0) < 1e-10);
  }
  SUBCASE("three-state chain passes") {
    AperiodicityReport rep = strong_aperiodicity_numeric(testing::three_state_cycle(), 0.1);
    CHECK(rep.is_strongly_aperiodic);
    CHECK(rep.sup_radius < 1.0 - 1e-6);
    CHECK(rep.r_delta == rep.sup_radius);
  }
  SUBCASE("even labels fail with witness at pi") {
    AperiodicityReport rep = strong_aperiodicity_numeric(testing::even_labels(), 0.1);
    CHECK_FALSE(rep.is_strongly_aperiodic);
    REQUIRE(rep.witness_t.has_value());
    CHECK(*rep.witness_t == Approx(kPi).epsilon(1e-9));
    CHECK(verify_peripheral_eigenvector(*rep.witness_phi));
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(strong_aperiodicity_numeric(testing::pm1_coin(), -1.0), Error);
    CHECK_THROWS_AS(strong_aperiodicity_numeric(testing::pm1_coin(), 0.1, 0.01), Error);
  }
}

TEST_CASE("witnesses with modulus-one eigenvalues have flat eigenvectors") {
  for (const MarkovChain& chain : {testing::pm1_coin(), testing::even_labels()}) {
    AperiodicityReport rep = strong_aperiodicity_numeric(chain, 0.1);
    REQUIRE(rep.witness_lambda.has_value());
    if (std::abs(*rep.witness_lambda) >= 1.0 - 1e-6) {
      CHECK(verify_peripheral_eigenvector(*rep.witness_phi));
    }
  }
}
