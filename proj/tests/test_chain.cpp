#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>

#include "mclt/chain.hpp"
#include "support/corpus.hpp"

using namespace mclt;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("coin chain validates") {
  MarkovChain chain = testing::pm1_coin();
  CHECK(chain.size() == 2);
  CHECK(chain.label(0) == -1);
  CHECK(chain.stationary()(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("identity matrix is reducible") {
  CHECK_THROWS_WITH_AS(validate_chain({0, 1}, mat2(1, 0, 0, 1), vec2(0.5, 0.5)),
                       doctest::Contains("Reducible"), Error);
}

TEST_CASE("row sum off by 0.1 is non-stochastic") {
  CHECK_THROWS_WITH_AS(validate_chain({0, 1}, mat2(0.5, 0.4, 0.5, 0.5), vec2(0.5, 0.5)),
                       doctest::Contains("NonStochastic"), Error);
}

TEST_CASE("duplicate labels rejected") {
  CHECK_THROWS_WITH_AS(validate_chain({3, 3}, mat2(0.5, 0.5, 0.5, 0.5), vec2(0.5, 0.5)),
                       doctest::Contains("DuplicateState"), Error);
}

TEST_CASE("two-cycle matrix is periodic") {
  CHECK_THROWS_WITH_AS(validate_chain({-1, 1}, mat2(0, 1, 1, 0), vec2(0.5, 0.5)),
                       doctest::Contains("PeriodicMatrix"), Error);
}

TEST_CASE("bad initial distribution rejected") {
  CHECK_THROWS_WITH_AS(validate_chain({-1, 1}, mat2(0.5, 0.5, 0.5, 0.5), vec2(0.7, 0.5)),
                       doctest::Contains("BadDistribution"), Error);
}

TEST_CASE("labels beyond 1e6 rejected") {
  CHECK_THROWS_AS(validate_chain({-1, 1000001}, mat2(0.5, 0.5, 0.5, 0.5), vec2(0.5, 0.5)), Error);
}

TEST_CASE("stationary distribution solves nu P = nu") {
  SUBCASE("doubly stochastic 2x2 gives uniform") {
    MarkovChain chain = testing::pm1_coin();
    CHECK(stationary_distribution(chain)(0) == doctest::Approx(0.5).epsilon(1e-13));
  }
  SUBCASE("P = [[0.9,0.1],[0.5,0.5]] gives (5/6, 1/6)") {
    MarkovChain chain = validate_chain({-1, 1}, mat2(0.9, 0.1, 0.5, 0.5), vec2(0.5, 0.5));
    CHECK(chain.stationary()(0) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(chain.stationary()(1) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  }
  SUBCASE("3-state doubly stochastic gives uniform") {
    MarkovChain chain = testing::three_state_cycle();
    for (int i = 0; i < 3; ++i) {
      CHECK(chain.stationary()(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    }
  }
  SUBCASE("residual below 1e-12") {
    MarkovChain chain = testing::four_state_mix();
    double resid = (chain.stationary().transpose() * chain.transition() -
                    chain.stationary().transpose())
                       .cwiseAbs()
                       .maxCoeff();
    CHECK(resid <= 1e-12);
    CHECK(chain.stationary().sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("mean drift") {
  CHECK(mean_drift(testing::pm1_coin()) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(mean_drift(testing::iid_uniform3()) == doctest::Approx(0.0).epsilon(1e-14));
  MarkovChain skew = validate_chain({-1, 1}, mat2(0.9, 0.1, 0.5, 0.5), vec2(0.5, 0.5));
  CHECK(mean_drift(skew) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("powers of P converge geometrically to the rank-one limit") {
  for (const MarkovChain& chain :
       {testing::three_state_cycle(), testing::four_state_mix(), testing::iid_uniform3()}) {
    Eigen::MatrixXd limit = Eigen::VectorXd::Ones(chain.size()) * chain.stationary().transpose();
    Eigen::MatrixXd pk = chain.transition();
    double prev = 1e300;
    for (int k = 1; k <= 50; ++k) {
      if (k == 25 || k == 50) {
        double resid = (pk - limit).cwiseAbs().maxCoeff();
        CHECK((resid < prev || resid < 1e-14));
        prev = resid;
      }
      pk = pk * chain.transition();
    }
    CHECK(prev < 1e-8);
  }
}

TEST_CASE("stationary distribution commutes with state permutation") {
  MarkovChain chain = testing::four_state_mix();
  // Permute states by reversal.
  const int n = chain.size();
  std::vector<long long> states(static_cast<size_t>(n));
  Eigen::MatrixXd P(n, n);
  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) {
    states[static_cast<size_t>(i)] = chain.label(n - 1 - i);
    mu(i) = chain.initial()(n - 1 - i);
    for (int j = 0; j < n; ++j) P(i, j) = chain.transition()(n - 1 - i, n - 1 - j);
  }
  MarkovChain permuted = validate_chain(states, P, mu);
  for (int i = 0; i < n; ++i) {
    CHECK(permuted.stationary()(i) ==
          doctest::Approx(chain.stationary()(n - 1 - i)).epsilon(1e-12));
  }
}

TEST_CASE("validation is deterministic") {
  MarkovChain a = testing::four_state_mix();
  MarkovChain b = testing::four_state_mix();
  CHECK(a.stationary() == b.stationary());
  CHECK(chain_to_json_text(a) == chain_to_json_text(b));
}

TEST_CASE("chain json round trip") {
  MarkovChain chain = testing::three_state_cycle();
  MarkovChain back = chain_from_json_text(chain_to_json_text(chain));
  CHECK(back.states() == chain.states());
  CHECK(back.transition() == chain.transition());
  CHECK_THROWS_AS(chain_from_json_text("{not json"), Error);
  CHECK_THROWS_AS(chain_from_json_text("{\"states\":[0,1]}"), Error);
}
