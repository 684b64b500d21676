#pragma once

// Named fixture chains shared by the unit and acceptance suites.

#include <Eigen/Dense>
#include <vector>

#include "mclt/chain.hpp"
#include "mclt/rng.hpp"

namespace mclt::testing {

// +-1 fair coin: i.i.d. signs; aperiodic matrix but not strongly aperiodic.
inline MarkovChain pm1_coin() {
  Eigen::MatrixXd P(2, 2);
  P << 0.5, 0.5, 0.5, 0.5;
  Eigen::VectorXd mu(2);
  mu << 0.5, 0.5;
  return validate_chain({-1, 1}, P, mu);
}

// 3-state doubly stochastic chain on labels (-1, 0, 1); strongly aperiodic.
inline MarkovChain three_state_cycle() {
  Eigen::MatrixXd P(3, 3);
  P << 0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0;
  Eigen::VectorXd mu(3);
  mu << 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0;
  return validate_chain({-1, 0, 1}, P, mu);
}

// i.i.d. uniform draw from {-1, 0, 1}; sigma^2 = 2/3.
inline MarkovChain iid_uniform3() {
  Eigen::MatrixXd P(3, 3);
  P.setConstant(1.0 / 3.0);
  Eigen::VectorXd mu(3);
  mu << 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0;
  return validate_chain({-1, 0, 1}, P, mu);
}

// Even labels (-2, 0, 2): every cycle sum is even, so t = pi is a witness.
inline MarkovChain even_labels() {
  Eigen::MatrixXd P(3, 3);
  P << 0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0;
  Eigen::VectorXd mu(3);
  mu << 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0;
  return validate_chain({-2, 0, 2}, P, mu);
}

// 4-state doubly stochastic mixer on labels (-2, -1, 1, 2); centered and
// strongly aperiodic.
inline MarkovChain four_state_mix() {
  Eigen::MatrixXd P(4, 4);
  P << 0.25, 0.25, 0.25, 0.25,
       0.50, 0.00, 0.25, 0.25,
       0.25, 0.50, 0.00, 0.25,
       0.00, 0.25, 0.50, 0.25;
  Eigen::VectorXd mu(4);
  mu << 0.25, 0.25, 0.25, 0.25;
  return validate_chain({-2, -1, 1, 2}, P, mu);
}

// i.i.d. fair draw from {-2, 2}: lattice span 2, needs relabeling.
inline MarkovChain iid_pm2() {
  Eigen::MatrixXd P(2, 2);
  P << 0.5, 0.5, 0.5, 0.5;
  Eigen::VectorXd mu(2);
  mu << 0.5, 0.5;
  return validate_chain({-2, 2}, P, mu);
}

// Single state with label 0 (valid, degenerate walk).
inline MarkovChain constant_zero() {
  Eigen::MatrixXd P(1, 1);
  P << 1.0;
  Eigen::VectorXd mu(1);
  mu << 1.0;
  return validate_chain({0}, P, mu);
}

// Random irreducible aperiodic chain with |S| <= 5 and labels in [-3, 3];
// resamples until the validator accepts.
inline MarkovChain random_chain(RngStream& rng) {
  for (;;) {
    int ns = 2 + static_cast<int>(rng.next_u64() % 4);  // 2..5 states
    std::vector<long long> pool = {-3, -2, -1, 0, 1, 2, 3};
    for (int i = 0; i < ns; ++i) {
      size_t j = static_cast<size_t>(i) +
                 static_cast<size_t>(rng.next_u64() % (pool.size() - static_cast<size_t>(i)));
      std::swap(pool[static_cast<size_t>(i)], pool[j]);
    }
    std::vector<long long> labels(pool.begin(), pool.begin() + ns);
    Eigen::MatrixXd P(ns, ns);
    for (int i = 0; i < ns; ++i) {
      double row_sum = 0.0;
      for (int j = 0; j < ns; ++j) {
        bool keep = rng.next_double() < 0.7;
        double w = keep ? 0.05 + rng.next_double() : 0.0;
        P(i, j) = w;
        row_sum += w;
      }
      if (row_sum == 0.0) {
        P(i, static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(ns))) = 1.0;
        row_sum = 1.0;
      }
      for (int j = 0; j < ns; ++j) P(i, j) /= row_sum;
    }
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(ns, 1.0 / ns);
    try {
      return validate_chain(labels, P, mu);
    } catch (const Error&) {
      continue;
    }
  }
}

}  // namespace mclt::testing
