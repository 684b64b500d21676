#pragma once

#include <utility>
#include <vector>

#include "mclt/chain.hpp"

namespace mclt {

// Exact joint law of Z_n = (S_n, X_n) over integer offsets x states, stored
// as a dense window [lo, hi] of offsets (cache-friendly, exact addressing).
// Probabilities sum to 1 up to rounding minus any explicitly trimmed tail
// mass, which is tracked in trimmed_mass.
class JointLaw {
 public:
  JointLaw(long long n, long long lo, int num_states);

  long long n() const { return n_; }
  long long lo() const { return lo_; }
  long long hi() const { return lo_ + width() - 1; }
  long long width() const { return static_cast<long long>(table_.size()) / num_states_; }
  int num_states() const { return num_states_; }
  double trimmed_mass() const { return trimmed_mass_; }

  double prob(long long offset, int state) const {
    if (offset < lo_ || offset > hi()) return 0.0;
    return table_[static_cast<size_t>((offset - lo_) * num_states_ + state)];
  }
  // P(S_n = offset), summed over states.
  double marginal(long long offset) const;
  double total_mass() const;
  double max_marginal() const;

  double* row(long long offset) {
    return table_.data() + (offset - lo_) * num_states_;
  }
  const double* row(long long offset) const {
    return table_.data() + (offset - lo_) * num_states_;
  }

  friend JointLaw evolve_law(const JointLaw& law, const MarkovChain& chain, double trim);
  friend JointLaw initial_law(const MarkovChain& chain);

 private:
  long long n_ = 0;
  long long lo_ = 0;
  int num_states_ = 0;
  double trimmed_mass_ = 0.0;
  std::vector<double> table_;
};

// Law at n = 0: mass mu(s) at (offset = s, state = s).
JointLaw initial_law(const MarkovChain& chain);

// One Markov step of Z_n: law'(x', s') = sum_s law(x' - s_{s'}, s) P(s, s').
// With trim > 0 the offset window is clipped where every state's mass is
// below trim; the discarded mass is accumulated in trimmed_mass().
JointLaw evolve_law(const JointLaw& law, const MarkovChain& chain, double trim = 0.0);

struct LltEntry {
  long long n = 0;
  double sup_scaled = 0.0;  // sqrt(n) * sup_x P(S_n = x)
};

struct LltScanResult {
  std::vector<LltEntry> entries;  // n = 1..n_max
  double c_emp = 0.0;
  // Set when the chain fails the exact strong-aperiodicity test; the scan is
  // still computed but the uniform bound is only guaranteed along the live
  // coset in that case.
  bool strong_aperiodicity_warning = false;
};

LltScanResult llt_scan(const MarkovChain& chain, long long n_max);

// sum_{n=0}^{N} |P(S_n=x, X_n=s) - P(S_n=y, X_n=s)| from exact DP.
double potential_kernel_sum(const MarkovChain& chain, long long x, long long y,
                            long long state_label, long long N);

struct KernelQuery {
  long long x = 0;
  long long y = 0;
  int state_index = 0;
};

struct KernelSumResult {
  double partial_sum = 0.0;
  double last_term = 0.0;  // magnitude of the final term, tail-decay evidence
  double max_late_term = 0.0;  // max term over the last 10% of the range
};

// All queries evaluated in a single DP sweep.
std::vector<KernelSumResult> potential_kernel_sums(const MarkovChain& chain,
                                                   const std::vector<KernelQuery>& queries,
                                                   long long N, double trim = 1e-30);

// (1/2pi) int_{-pi}^{pi} E^mu(e^{i t S_0} Q(t)^n 1) e^{-itx} dt by the
// trapezoid rule on a uniform grid; exact for lattice-supported laws once
// quad_points clears the Nyquist precondition quad_points >= 4 (n+1) max|s|.
double fourier_inversion_prob(const MarkovChain& chain, long long n, long long x,
                              long long quad_points);

// P(S_n = x) for every n <= n_max and every offset in the support window,
// from a single quadrature sweep; rows[n].probs[i] is the probability of
// offset rows[n].lo + i.
struct FourierTable {
  struct Row {
    long long lo = 0;
    std::vector<double> probs;
  };
  std::vector<Row> rows;  // indexed by n = 0..n_max
};

FourierTable fourier_inversion_table(const MarkovChain& chain, long long n_max,
                                     long long quad_points);

// E^mu[(L_n(x) - L_n(y))^4] by exhaustive weighted enumeration of all
// length-(n+1) state paths. Throws too_large for n > 12.
double fourth_moment_exact(const MarkovChain& chain, long long n, long long x, long long y);

// Period/lattice structure of the walk, computed exactly.
//   lattice_span  gcd of label sums over directed cycles of the transition
//                 graph (0 when every cycle sum vanishes);
//   period        least k >= 1 such that the k-step increment sum
//                 X_1 + ... + X_k can be 0 with positive probability
//                 (increment-count convention);
//   coset_offsets residues mod period*lattice_span of the increment sums
//                 reachable at each step-phase 0..period-1.
struct PeriodStructure {
  long long lattice_span = 1;
  long long period = 1;
  std::vector<std::vector<long long>> coset_offsets;
};

PeriodStructure period_structure(const MarkovChain& chain);

// sum_{n=0}^{N_blocks} | sum_{k=0}^{p-1} ( P(S_{np+k}=x) - P(S_{np+k}=y) ) |.
double periodic_potential_kernel_sum(const MarkovChain& chain, long long x, long long y,
                                     long long n_blocks);
std::vector<double> periodic_potential_kernel_sums(
    const MarkovChain& chain, const std::vector<std::pair<long long, long long>>& xy,
    long long n_blocks);

}  // namespace mclt
