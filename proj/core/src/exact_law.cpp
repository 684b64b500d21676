#include "mclt/exact_law.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>

#include "mclt/spectral.hpp"

namespace mclt {

JointLaw::JointLaw(long long n, long long lo, int num_states)
    : n_(n), lo_(lo), num_states_(num_states) {}

double JointLaw::marginal(long long offset) const {
  if (offset < lo_ || offset > hi()) return 0.0;
  const double* r = row(offset);
  double sum = 0.0;
  for (int s = 0; s < num_states_; ++s) sum += r[s];
  return sum;
}

double JointLaw::total_mass() const {
  double sum = 0.0;
  for (double v : table_) sum += v;
  return sum;
}

double JointLaw::max_marginal() const {
  double best = 0.0;
  for (long long x = lo_; x <= hi(); ++x) best = std::max(best, marginal(x));
  return best;
}

JointLaw initial_law(const MarkovChain& chain) {
  JointLaw law(0, chain.min_label(), chain.size());
  law.table_.assign(static_cast<size_t>((chain.max_label() - chain.min_label() + 1) *
                                        chain.size()),
                    0.0);
  for (int i = 0; i < chain.size(); ++i) {
    law.row(chain.label(i))[i] = chain.initial()(i);
  }
  return law;
}

JointLaw evolve_law(const JointLaw& law, const MarkovChain& chain, double trim) {
  const int ns = chain.size();
  const long long new_lo = law.lo_ + chain.min_label();
  const long long new_hi = law.hi() + chain.max_label();
  JointLaw next(law.n_ + 1, new_lo, ns);
  next.trimmed_mass_ = law.trimmed_mass_;
  next.table_.assign(static_cast<size_t>((new_hi - new_lo + 1) * ns), 0.0);

  const Eigen::MatrixXd& P = chain.transition();
  for (long long x = law.lo_; x <= law.hi(); ++x) {
    const double* src = law.row(x);
    for (int s = 0; s < ns; ++s) {
      double mass = src[s];
      if (mass == 0.0) continue;
      for (int sp = 0; sp < ns; ++sp) {
        double p = P(s, sp);
        if (p == 0.0) continue;
        next.row(x + chain.label(sp))[sp] += mass * p;
      }
    }
  }

  if (trim > 0.0) {
    long long lo = new_lo, hi = new_hi;
    auto row_max = [&](long long x) {
      const double* r = next.row(x);
      double m = 0.0;
      for (int s = 0; s < ns; ++s) m = std::max(m, r[s]);
      return m;
    };
    while (lo < hi && row_max(lo) < trim) ++lo;
    while (hi > lo && row_max(hi) < trim) --hi;
    if (lo != new_lo || hi != new_hi) {
      JointLaw clipped(next.n_, lo, ns);
      clipped.table_.assign(static_cast<size_t>((hi - lo + 1) * ns), 0.0);
      double dropped = 0.0;
      for (long long x = new_lo; x <= new_hi; ++x) {
        if (x < lo || x > hi) {
          dropped += next.marginal(x);
        } else {
          const double* src = next.row(x);
          double* dst = clipped.row(x);
          for (int s = 0; s < ns; ++s) dst[s] = src[s];
        }
      }
      clipped.trimmed_mass_ = next.trimmed_mass_ + dropped;
      return clipped;
    }
  }
  return next;
}

LltScanResult llt_scan(const MarkovChain& chain, long long n_max) {
  LltScanResult out;
  out.strong_aperiodicity_warning = !strong_aperiodicity_exact(chain).first;
  JointLaw law = initial_law(chain);
  out.entries.reserve(static_cast<size_t>(n_max));
  for (long long n = 1; n <= n_max; ++n) {
    law = evolve_law(law, chain, 1e-30);
    LltEntry e;
    e.n = n;
    e.sup_scaled = std::sqrt(static_cast<double>(n)) * law.max_marginal();
    out.c_emp = std::max(out.c_emp, e.sup_scaled);
    out.entries.push_back(e);
  }
  return out;
}

std::vector<KernelSumResult> potential_kernel_sums(const MarkovChain& chain,
                                                   const std::vector<KernelQuery>& queries,
                                                   long long N, double trim) {
  std::vector<KernelSumResult> out(queries.size());
  JointLaw law = initial_law(chain);
  const long long late_start = N - N / 10;
  for (long long n = 0; n <= N; ++n) {
    if (n > 0) law = evolve_law(law, chain, trim);
    for (size_t q = 0; q < queries.size(); ++q) {
      const KernelQuery& kq = queries[q];
      double term = std::abs(law.prob(kq.x, kq.state_index) - law.prob(kq.y, kq.state_index));
      out[q].partial_sum += term;
      if (n == N) out[q].last_term = term;
      if (n >= late_start) out[q].max_late_term = std::max(out[q].max_late_term, term);
    }
  }
  return out;
}

double potential_kernel_sum(const MarkovChain& chain, long long x, long long y,
                            long long state_label, long long N) {
  int s = chain.index_of(state_label);
  if (s < 0) raise(errc::config_invalid, "state label " + std::to_string(state_label) +
                                             " is not a state of the chain");
  KernelQuery q{x, y, s};
  return potential_kernel_sums(chain, {q}, N)[0].partial_sum;
}

namespace {

// mu^T Q(t)^k 1 for k = 0..n_max at one t, appended to per-k accumulators.
void char_function_sweep(const MarkovChain& chain, double t, long long n_max,
                         const std::function<void(long long, std::complex<double>)>& emit) {
  const int ns = chain.size();
  Eigen::VectorXcd v(ns);
  for (int i = 0; i < ns; ++i) v(i) = chain.initial()(i);
  // v^T holds mu^T Q(t)^k; the phase e^{i t s_y} rides on the target column.
  std::vector<std::complex<double>> phase(static_cast<size_t>(ns));
  for (int y = 0; y < ns; ++y) {
    phase[static_cast<size_t>(y)] = std::polar(1.0, t * static_cast<double>(chain.label(y)));
  }
  emit(0, [&] {
    // k = 0: E^mu(e^{i t S_0}) with S_0 = X_0.
    std::complex<double> acc = 0.0;
    for (int i = 0; i < ns; ++i) acc += v(i) * phase[static_cast<size_t>(i)];
    return acc;
  }());
  // Fold the S_0 = X_0 phase into the starting vector, then each step
  // multiplies by Q(t)^T.
  for (int i = 0; i < ns; ++i) v(i) *= phase[static_cast<size_t>(i)];
  const Eigen::MatrixXd& P = chain.transition();
  Eigen::VectorXcd w(ns);
  for (long long k = 1; k <= n_max; ++k) {
    for (int y = 0; y < ns; ++y) {
      std::complex<double> acc = 0.0;
      for (int x = 0; x < ns; ++x) acc += v(x) * P(x, y);
      w(y) = acc * phase[static_cast<size_t>(y)];
    }
    v.swap(w);
    emit(k, v.sum());
  }
}

}  // namespace

double fourier_inversion_prob(const MarkovChain& chain, long long n, long long x,
                              long long quad_points) {
  const long long required = 4 * (n + 1) * chain.max_abs_label();
  if (quad_points < std::max<long long>(required, 1)) {
    raise(errc::under_resolved, "quad_points " + std::to_string(quad_points) +
                                    " below Nyquist requirement " + std::to_string(required));
  }
  const long long M = quad_points;
  std::vector<std::complex<double>> cn(static_cast<size_t>(M));
  for (long long j = 0; j < M; ++j) {
    double t = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                       static_cast<double>(M);
    char_function_sweep(chain, t, n, [&](long long k, std::complex<double> val) {
      if (k == n) cn[static_cast<size_t>(j)] = val;
    });
  }
  std::complex<double> acc = 0.0;
  for (long long j = 0; j < M; ++j) {
    double t = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                       static_cast<double>(M);
    acc += cn[static_cast<size_t>(j)] *
           std::polar(1.0, -t * static_cast<double>(x));
  }
  return acc.real() / static_cast<double>(M);
}

FourierTable fourier_inversion_table(const MarkovChain& chain, long long n_max,
                                     long long quad_points) {
  const long long max_s = chain.max_abs_label();
  const long long required = 4 * (n_max + 1) * max_s;
  if (quad_points < std::max<long long>(required, 1)) {
    raise(errc::under_resolved, "quad_points " + std::to_string(quad_points) +
                                    " below Nyquist requirement " + std::to_string(required));
  }
  const long long M = quad_points;
  // c[k][j] = mu^T Q(t_j)^k 1 over the uniform grid.
  std::vector<std::vector<std::complex<double>>> c(
      static_cast<size_t>(n_max + 1),
      std::vector<std::complex<double>>(static_cast<size_t>(M)));
  for (long long j = 0; j < M; ++j) {
    double t = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                       static_cast<double>(M);
    char_function_sweep(chain, t, n_max, [&](long long k, std::complex<double> val) {
      c[static_cast<size_t>(k)][static_cast<size_t>(j)] = val;
    });
  }
  FourierTable table;
  table.rows.resize(static_cast<size_t>(n_max + 1));
  for (long long n = 0; n <= n_max; ++n) {
    long long span = (n + 1) * max_s;
    auto& row = table.rows[static_cast<size_t>(n)];
    row.lo = -span;
    row.probs.assign(static_cast<size_t>(2 * span + 1), 0.0);
    for (long long x = -span; x <= span; ++x) {
      std::complex<double> acc = 0.0;
      for (long long j = 0; j < M; ++j) {
        double t = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                           static_cast<double>(M);
        acc += c[static_cast<size_t>(n)][static_cast<size_t>(j)] *
               std::polar(1.0, -t * static_cast<double>(x));
      }
      row.probs[static_cast<size_t>(x + span)] = acc.real() / static_cast<double>(M);
    }
  }
  return table;
}

double fourth_moment_exact(const MarkovChain& chain, long long n, long long x, long long y) {
  if (n > 12) raise(errc::too_large, "path enumeration capped at n = 12");
  if (n < 0) raise(errc::config_invalid, "n must be nonnegative");
  const int ns = chain.size();
  double total = 0.0;
  // DFS over all state paths x_0..x_n, carrying the partial sum and the two
  // visit counters.
  struct Frame {
    int state;
    long long sum;
    int cx, cy;
    double weight;
    long long depth;
  };
  std::vector<Frame> stack;
  for (int s0 = 0; s0 < ns; ++s0) {
    double w0 = chain.initial()(s0);
    if (w0 == 0.0) continue;
    long long sum0 = chain.label(s0);
    stack.push_back({s0, sum0, sum0 == x ? 1 : 0, sum0 == y ? 1 : 0, w0, 0});
  }
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.depth == n) {
      double d = static_cast<double>(f.cx - f.cy);
      total += f.weight * d * d * d * d;
      continue;
    }
    for (int sp = 0; sp < ns; ++sp) {
      double p = chain.transition()(f.state, sp);
      if (p == 0.0) continue;
      long long sum = f.sum + chain.label(sp);
      stack.push_back({sp, sum, f.cx + (sum == x ? 1 : 0), f.cy + (sum == y ? 1 : 0),
                       f.weight * p, f.depth + 1});
    }
  }
  return total;
}

namespace {

// gcd of label sums over the fundamental cycles of the transition graph;
// equals the gcd over all closed walks by strong connectivity.
long long cycle_sum_gcd(const MarkovChain& chain) {
  const int n = chain.size();
  std::vector<long long> A(static_cast<size_t>(n), 0);
  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (chain.transition()(u, v) > 0.0) edges.push_back({u, v});
    }
  }
  std::vector<bool> tree(edges.size(), false);
  seen[0] = true;
  std::vector<int> queue{0};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (size_t ei = 0; ei < edges.size(); ++ei) {
      auto [a, b] = edges[ei];
      if (a == u && !seen[static_cast<size_t>(b)]) {
        seen[static_cast<size_t>(b)] = true;
        tree[ei] = true;
        A[static_cast<size_t>(b)] = A[static_cast<size_t>(u)] + chain.label(b);
        queue.push_back(b);
      } else if (b == u && !seen[static_cast<size_t>(a)]) {
        seen[static_cast<size_t>(a)] = true;
        tree[ei] = true;
        A[static_cast<size_t>(a)] = A[static_cast<size_t>(u)] - chain.label(b);
        queue.push_back(a);
      }
    }
  }
  long long g = 0;
  for (size_t ei = 0; ei < edges.size(); ++ei) {
    if (tree[ei]) continue;
    auto [a, b] = edges[ei];
    long long w = A[static_cast<size_t>(a)] + chain.label(b) - A[static_cast<size_t>(b)];
    g = std::gcd(g, w);
  }
  return g;
}

}  // namespace

PeriodStructure period_structure(const MarkovChain& chain) {
  PeriodStructure out;
  out.lattice_span = cycle_sum_gcd(chain);

  const int ns = chain.size();
  const long long max_s = std::max<long long>(chain.max_abs_label(), 1);
  // Zero-sum closed walks, when they exist at all, appear within a horizon
  // set by combining one nonnegative-sum and one nonpositive-sum cycle plus
  // connecting paths.
  const long long k_max = 2 * ns * ns * max_s + 2 * ns + 2;
  const long long span = k_max * max_s;
  const long long width = 2 * span + 1;

  // reach[state * width + (sum + span)] over increment sums X_1 + ... + X_k.
  std::vector<char> cur(static_cast<size_t>(ns * width), 0);
  for (int s = 0; s < ns; ++s) {
    if (chain.initial()(s) > 0.0) cur[static_cast<size_t>(s * width + span)] = 1;
  }
  long long period = 0;
  std::vector<char> next(static_cast<size_t>(ns * width), 0);
  std::vector<std::vector<long long>> sums_at_step;
  for (long long k = 1; k <= k_max; ++k) {
    // Keep sweeping a few periods past the first zero-sum step so the coset
    // residues are collected for every phase.
    if (period > 0 && k > 3 * period + 3) break;
    std::fill(next.begin(), next.end(), 0);
    for (int s = 0; s < ns; ++s) {
      for (long long w = -span; w <= span; ++w) {
        if (!cur[static_cast<size_t>(s * width + (w + span))]) continue;
        for (int sp = 0; sp < ns; ++sp) {
          if (chain.transition()(s, sp) == 0.0) continue;
          long long nw = w + chain.label(sp);
          if (std::llabs(nw) > span) continue;
          next[static_cast<size_t>(sp * width + (nw + span))] = 1;
        }
      }
    }
    cur.swap(next);
    std::vector<long long> sums;
    bool zero = false;
    for (int s = 0; s < ns; ++s) {
      for (long long w = -span; w <= span; ++w) {
        if (cur[static_cast<size_t>(s * width + (w + span))]) {
          sums.push_back(w);
          if (w == 0) zero = true;
        }
      }
    }
    sums_at_step.push_back(std::move(sums));
    if (zero && period == 0) period = k;
  }
  out.period = period;  // 0 when no zero-sum horizon was found (drifting walk)

  if (period > 0) {
    long long modulus = period * std::max<long long>(out.lattice_span, 1);
    out.coset_offsets.assign(static_cast<size_t>(period), {});
    std::vector<std::set<long long>> by_phase(static_cast<size_t>(period));
    // Continue the reachability sweep far enough to cover every phase.
    for (size_t ki = 0; ki < sums_at_step.size(); ++ki) {
      long long k = static_cast<long long>(ki) + 1;
      for (long long w : sums_at_step[ki]) {
        long long r = w % modulus;
        if (r < 0) r += modulus;
        by_phase[static_cast<size_t>(k % period)].insert(r);
      }
    }
    for (long long r = 0; r < period; ++r) {
      out.coset_offsets[static_cast<size_t>(r)].assign(
          by_phase[static_cast<size_t>(r)].begin(), by_phase[static_cast<size_t>(r)].end());
    }
  }
  return out;
}

std::vector<double> periodic_potential_kernel_sums(
    const MarkovChain& chain, const std::vector<std::pair<long long, long long>>& xy,
    long long n_blocks) {
  PeriodStructure ps = period_structure(chain);
  const long long p = std::max<long long>(ps.period, 1);
  std::vector<double> out(xy.size(), 0.0);
  std::vector<double> inner(xy.size(), 0.0);
  JointLaw law = initial_law(chain);
  for (long long nb = 0; nb <= n_blocks; ++nb) {
    std::fill(inner.begin(), inner.end(), 0.0);
    for (long long k = 0; k < p; ++k) {
      long long step = nb * p + k;
      if (step > 0) law = evolve_law(law, chain, 1e-30);
      for (size_t q = 0; q < xy.size(); ++q) {
        inner[q] += law.marginal(xy[q].first) - law.marginal(xy[q].second);
      }
    }
    for (size_t q = 0; q < xy.size(); ++q) out[q] += std::abs(inner[q]);
  }
  return out;
}

double periodic_potential_kernel_sum(const MarkovChain& chain, long long x, long long y,
                                     long long n_blocks) {
  return periodic_potential_kernel_sums(chain, {{x, y}}, n_blocks)[0];
}

}  // namespace mclt
