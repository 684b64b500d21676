#include "mclt/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace mclt {

ChainSamplingTables::ChainSamplingTables(const MarkovChain& chain)
    : size(chain.size()), labels(chain.states()) {
  initial_cdf.resize(static_cast<size_t>(size));
  double acc = 0.0;
  for (int i = 0; i < size; ++i) {
    acc += chain.initial()(i);
    initial_cdf[static_cast<size_t>(i)] = acc;
  }
  initial_cdf.back() = 1.0;
  row_cdf.resize(static_cast<size_t>(size) * static_cast<size_t>(size));
  for (int i = 0; i < size; ++i) {
    acc = 0.0;
    for (int j = 0; j < size; ++j) {
      acc += chain.transition()(i, j);
      row_cdf[static_cast<size_t>(i * size + j)] = acc;
    }
    row_cdf[static_cast<size_t>(i * size + size - 1)] = 1.0;
  }
}

int ChainSamplingTables::sample_initial(RngStream& rng) const {
  double u = rng.next_double();
  for (int i = 0; i < size; ++i) {
    if (u < initial_cdf[static_cast<size_t>(i)]) return i;
  }
  return size - 1;
}

int ChainSamplingTables::sample_step(int from, RngStream& rng) const {
  double u = rng.next_double();
  const double* row = row_cdf.data() + static_cast<size_t>(from) * static_cast<size_t>(size);
  for (int j = 0; j < size; ++j) {
    if (u < row[j]) return j;
  }
  return size - 1;
}

PathSample sample_path(const MarkovChain& chain, long long n, std::uint64_t seed) {
  if (n < 0) raise(errc::config_invalid, "sample_path: n must be nonnegative");
  ChainSamplingTables tables(chain);
  RngStream rng(seed, 0);
  PathSample out;
  out.seed = seed;
  out.states.reserve(static_cast<size_t>(n + 1));
  out.sums.reserve(static_cast<size_t>(n + 1));
  int state = tables.sample_initial(rng);
  long long sum = tables.labels[static_cast<size_t>(state)];
  out.states.push_back(tables.labels[static_cast<size_t>(state)]);
  out.sums.push_back(sum);
  for (long long k = 1; k <= n; ++k) {
    state = tables.sample_step(state, rng);
    long long lab = tables.labels[static_cast<size_t>(state)];
    sum += lab;
    out.states.push_back(lab);
    out.sums.push_back(sum);
  }
  return out;
}

long long sample_terminal_sum(const ChainSamplingTables& tables, long long n, RngStream rng) {
  int state = tables.sample_initial(rng);
  long long sum = tables.labels[static_cast<size_t>(state)];
  for (long long k = 1; k <= n; ++k) {
    state = tables.sample_step(state, rng);
    sum += tables.labels[static_cast<size_t>(state)];
  }
  return sum;
}

StepFunction walk_process(const PathSample& path) {
  const long long n = path.n();
  const double root_n = std::sqrt(static_cast<double>(std::max<long long>(n, 1)));
  std::vector<double> breakpoints;
  std::vector<double> values;
  if (n == 0) {
    return StepFunction(0.0, 1.0, {}, {static_cast<double>(path.sums[0])});
  }
  breakpoints.reserve(static_cast<size_t>(n));
  values.reserve(static_cast<size_t>(n) + 1);
  for (long long k = 0; k <= n; ++k) {
    values.push_back(static_cast<double>(path.sums[static_cast<size_t>(k)]) / root_n);
    if (k >= 1) breakpoints.push_back(static_cast<double>(k) / static_cast<double>(n));
  }
  // Breakpoint n/n == 1 makes W_n(1) = S_n/sqrt(n) a right-endpoint value.
  return StepFunction(0.0, 1.0, std::move(breakpoints), std::move(values));
}

StepFunction walk_occupation_clock(const PathSample& path) {
  const long long n = path.n();
  const double root_n = std::sqrt(static_cast<double>(std::max<long long>(n, 1)));
  const double dn = static_cast<double>(std::max<long long>(n, 1));
  std::vector<double> breakpoints;
  std::vector<double> values;
  values.reserve(static_cast<size_t>(n) + 1);
  breakpoints.reserve(static_cast<size_t>(n));
  for (long long k = 0; k <= n; ++k) {
    values.push_back(static_cast<double>(path.sums[static_cast<size_t>(k)]) / root_n);
    if (k >= 1) breakpoints.push_back(static_cast<double>(k) / dn);
  }
  return StepFunction(0.0, static_cast<double>(n + 1) / dn, std::move(breakpoints),
                      std::move(values));
}

BrownianPath brownian_path(double sigma, long long mesh, std::uint64_t seed) {
  if (!(sigma > 0.0)) raise(errc::config_invalid, "brownian_path: sigma must be positive");
  if (mesh < 1) raise(errc::config_invalid, "brownian_path: mesh must be >= 1");
  BrownianPath out;
  out.sigma = sigma;
  out.mesh = mesh;
  out.values.resize(static_cast<size_t>(mesh) + 1);
  out.values[0] = 0.0;
  RngStream rng(seed, 0);
  const double scale = sigma / std::sqrt(static_cast<double>(mesh));
  double acc = 0.0;
  for (long long i = 1; i <= mesh; ++i) {
    acc += scale * rng.next_gaussian();
    out.values[static_cast<size_t>(i)] = acc;
  }
  return out;
}

double brownian_local_time(const BrownianPath& path, double t, double x, double eps) {
  if (!(eps > 0.0)) raise(errc::config_invalid, "brownian_local_time: eps must be positive");
  if (!(t >= 0.0 && t <= 1.0)) {
    raise(errc::config_invalid, "brownian_local_time: t must lie in [0,1]");
  }
  const double lo = x - eps, hi = x + eps;
  const double dt = 1.0 / static_cast<double>(path.mesh);
  double occupied = 0.0;
  const long long full = static_cast<long long>(std::floor(t * static_cast<double>(path.mesh)));
  for (long long i = 0; i < path.mesh; ++i) {
    double seg_start = static_cast<double>(i) * dt;
    if (seg_start >= t) break;
    double seg_len = (i < full) ? dt : (t - seg_start);
    if (seg_len <= 0.0) break;
    double w0 = path.values[static_cast<size_t>(i)];
    double w1 = path.values[static_cast<size_t>(i) + 1];
    // Time the linear interpolant spends inside [lo, hi] over this segment.
    double frac;
    if (w0 == w1) {
      frac = (w0 >= lo && w0 <= hi) ? 1.0 : 0.0;
    } else {
      double a = (lo - w0) / (w1 - w0);
      double b = (hi - w0) / (w1 - w0);
      if (a > b) std::swap(a, b);
      frac = std::clamp(b, 0.0, 1.0) - std::clamp(a, 0.0, 1.0);
    }
    // Only the first seg_len portion of the segment counts toward time t;
    // the interpolant crosses the band uniformly in time, so scaling the
    // full-segment fraction by seg_len/dt is exact for the clipped segment
    // only when the segment is fully inside [0, t]. For the single partial
    // segment we re-clip in time.
    if (seg_len == dt) {
      occupied += frac * dt;
    } else {
      double cut = seg_len / dt;  // in (0,1]
      double a = (w0 == w1) ? ((w0 >= lo && w0 <= hi) ? 0.0 : 1.0) : (lo - w0) / (w1 - w0);
      double b = (w0 == w1) ? ((w0 >= lo && w0 <= hi) ? 1.0 : 0.0) : (hi - w0) / (w1 - w0);
      if (a > b) std::swap(a, b);
      double in_lo = std::clamp(a, 0.0, cut);
      double in_hi = std::clamp(b, 0.0, cut);
      occupied += (in_hi - in_lo) * dt;
    }
  }
  return occupied / (2.0 * eps);
}

}  // namespace mclt
