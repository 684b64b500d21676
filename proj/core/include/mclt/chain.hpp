#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mclt/error.hpp"

namespace mclt {

// Tolerances used when validating chain input. Inputs are rationals entered
// in double precision, so row sums and stationarity residuals are held to
// 1e-12 while the drift-zero check gets 1e-10.
inline constexpr double kStochasticTol = 1e-12;
inline constexpr double kStationaryTol = 1e-12;
inline constexpr double kDriftTol = 1e-10;
inline constexpr long long kMaxLabel = 1'000'000;

// Finite-state Markov chain with integer state labels. The stationary
// distribution is solved for at construction and all structural invariants
// (stochastic rows, irreducibility, matrix-level aperiodicity) are enforced,
// so a MarkovChain value is always safe to share between threads.
class MarkovChain {
 public:
  // Validates and builds a chain; throws mclt::Error on any violation:
  //   non_stochastic    row sum off by more than 1e-12, or entry outside [0,1]
  //   duplicate_state   repeated state label
  //   label_out_of_range |label| > 1e6 (keeps DP offset tables addressable)
  //   bad_distribution  initial vector is not a probability vector
  //   reducible         transition graph not strongly connected
  //   periodic_matrix   gcd of cycle lengths > 1
  static MarkovChain validate(std::vector<long long> states,
                              Eigen::MatrixXd transition,
                              Eigen::VectorXd initial);

  int size() const { return static_cast<int>(states_.size()); }
  const std::vector<long long>& states() const { return states_; }
  long long label(int i) const { return states_[static_cast<size_t>(i)]; }
  const Eigen::MatrixXd& transition() const { return transition_; }
  const Eigen::VectorXd& initial() const { return initial_; }
  const Eigen::VectorXd& stationary() const { return stationary_; }

  long long max_abs_label() const;
  long long min_label() const;
  long long max_label() const;
  // Index of a label, or -1 if the label is not a state.
  int index_of(long long label) const;

 private:
  MarkovChain() = default;

  std::vector<long long> states_;
  Eigen::MatrixXd transition_;
  Eigen::VectorXd initial_;
  Eigen::VectorXd stationary_;
};

MarkovChain validate_chain(const std::vector<long long>& states,
                           const Eigen::MatrixXd& transition,
                           const Eigen::VectorXd& initial);

// nu with nu^T P = nu^T, sum 1; computed at construction, returned here.
const Eigen::VectorXd& stationary_distribution(const MarkovChain& chain);

// E_nu(X_0) = sum_s nu_s * s. Callers that require the centered setting
// reject when |drift| > kDriftTol.
double mean_drift(const MarkovChain& chain);

// Chain specification file: {"states":[ints],"transition":[[rows]],"initial":[floats]}.
MarkovChain load_chain(const std::string& path);
MarkovChain chain_from_json_text(const std::string& text);
std::string chain_to_json_text(const MarkovChain& chain);

}  // namespace mclt
