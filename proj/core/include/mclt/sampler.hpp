#pragma once

#include <cstdint>
#include <vector>

#include "mclt/chain.hpp"
#include "mclt/rng.hpp"
#include "mclt/step_function.hpp"

namespace mclt {

// One realized trajectory (X_0..X_n as labels, S_0..S_n) with its seed.
// sums[0] == states[0] and sums[k] - sums[k-1] == states[k].
struct PathSample {
  std::uint64_t seed = 0;
  std::vector<long long> states;
  std::vector<long long> sums;

  long long n() const { return static_cast<long long>(sums.size()) - 1; }
};

// Row-wise cumulative transition probabilities, built once per chain so that
// tight sampling loops avoid re-deriving them.
struct ChainSamplingTables {
  explicit ChainSamplingTables(const MarkovChain& chain);

  int size = 0;
  std::vector<long long> labels;
  std::vector<double> initial_cdf;
  std::vector<double> row_cdf;  // size x size, row-major

  int sample_initial(RngStream& rng) const;
  int sample_step(int from, RngStream& rng) const;
};

// X_0 ~ mu, X_{k+1} ~ P(X_k, .) by inverse CDF on the counter-based stream
// derived from (seed). Deterministic for a fixed seed.
PathSample sample_path(const MarkovChain& chain, long long n, std::uint64_t seed);

// Stream for path `path_index` within a batch keyed by `master_seed`.
// Distinct indices give statistically independent sub-streams.
inline RngStream path_stream(std::uint64_t master_seed, std::uint64_t path_index) {
  return RngStream(master_seed, path_index);
}

// S_n for one path without materializing the trajectory.
long long sample_terminal_sum(const ChainSamplingTables& tables, long long n, RngStream rng);

// W_n(t) = S_{floor(nt)} / sqrt(n) on [0,1], cadlag with breakpoints k/n.
StepFunction walk_process(const PathSample& path);

// The same walk on the extended clock [0, (n+1)/n]: every position S_0..S_n
// occupies one tick of length 1/n. This is the clock under which the
// occupation measure matches integrals of the local-time profile exactly,
// cell by cell (see local_time.hpp).
StepFunction walk_occupation_clock(const PathSample& path);

// W(0)=0, increments i.i.d. N(0, sigma^2/mesh) at resolution 1/mesh.
struct BrownianPath {
  double sigma = 1.0;
  long long mesh = 1;
  std::vector<double> values;  // size mesh+1
};

BrownianPath brownian_path(double sigma, long long mesh, std::uint64_t seed);

// (1/2eps) * Leb{ s <= t : |W(s) - x| <= eps } with the sampled path
// interpolated piecewise linearly. mesh*eps >= 10 keeps the band resolved.
double brownian_local_time(const BrownianPath& path, double t, double x, double eps);

}  // namespace mclt
