#include "mclt/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace mclt {

StepFunction::StepFunction(double a, double b, std::vector<double> breakpoints,
                           std::vector<double> values)
    : a_(a), b_(b), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (!(a_ < b_)) raise(errc::domain_mismatch, "step function needs a < b");
  if (values_.size() != breakpoints_.size() + 1) {
    raise(errc::domain_mismatch, "piece count must be breakpoint count + 1");
  }
  double prev = a_;
  for (double bp : breakpoints_) {
    if (!(bp > prev) || !(bp <= b_)) {
      raise(errc::domain_mismatch, "breakpoints must be strictly increasing inside (a, b]");
    }
    prev = bp;
  }
}

double StepFunction::operator()(double x) const {
  if (x < a_ || x > b_) raise(errc::domain_mismatch, "evaluation outside domain");
  // Piece index: number of breakpoints <= x.
  size_t idx = static_cast<size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin());
  return values_[idx];
}

double StepFunction::left_limit(double x) const {
  if (x <= a_ || x > b_) raise(errc::domain_mismatch, "left limit outside (a, b]");
  size_t idx = static_cast<size_t>(
      std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin());
  return values_[idx];
}

double occupation_measure(const StepFunction& f, double lo, double hi) {
  if (!(lo <= hi)) raise(errc::domain_mismatch, "need lo <= hi");
  double total = 0.0;
  for (int i = 0; i < f.piece_count(); ++i) {
    double v = f.values()[static_cast<size_t>(i)];
    if (v >= lo && v < hi) total += f.piece_hi(i) - f.piece_lo(i);
  }
  return total;
}

double modulus(const StepFunction& f, double delta) {
  if (!(delta > 0.0)) raise(errc::domain_mismatch, "modulus needs delta > 0");
  const int m = f.piece_count();
  // Two pieces i < j contain points closer than delta iff piece_lo(j) -
  // piece_hi(i) < delta (the gap between the pieces, not attained but
  // approached). Sliding window with monotone deques for min/max.
  double best = 0.0;
  std::deque<int> maxq, minq;
  int left = 0;
  for (int j = 0; j < m; ++j) {
    // Add piece j to the window before comparing (same-piece pairs give 0).
    while (!maxq.empty() &&
           f.values()[static_cast<size_t>(maxq.back())] <= f.values()[static_cast<size_t>(j)]) {
      maxq.pop_back();
    }
    maxq.push_back(j);
    while (!minq.empty() &&
           f.values()[static_cast<size_t>(minq.back())] >= f.values()[static_cast<size_t>(j)]) {
      minq.pop_back();
    }
    minq.push_back(j);
    // Evict pieces i with gap >= delta.
    while (left < j && !(f.piece_lo(j) - f.piece_hi(left) < delta)) {
      if (maxq.front() == left) maxq.pop_front();
      if (minq.front() == left) minq.pop_front();
      ++left;
    }
    double w_max = f.values()[static_cast<size_t>(maxq.front())];
    double w_min = f.values()[static_cast<size_t>(minq.front())];
    best = std::max(best, w_max - w_min);
  }
  return best;
}

namespace {

// Oscillation (max - min of piece values) of f over [u, w), or [u, b] when
// closed_right.
double oscillation(const StepFunction& f, double u, double w, bool closed_right) {
  double vmax = -1e300, vmin = 1e300;
  for (int i = 0; i < f.piece_count(); ++i) {
    double lo = f.piece_lo(i);
    double hi = f.piece_hi(i);
    bool last = i == f.piece_count() - 1;
    // Piece occupies [lo, hi) (plus the point b when last). It intersects
    // the window when lo < w (or lo <= w for a closed window) and u < hi
    // (or u <= hi for the last, closed, piece).
    bool right_ok = closed_right ? (lo <= w) : (lo < w);
    bool left_ok = last ? (u <= hi) : (u < hi);
    if (right_ok && left_ok) {
      vmax = std::max(vmax, f.values()[static_cast<size_t>(i)]);
      vmin = std::min(vmin, f.values()[static_cast<size_t>(i)]);
    }
  }
  if (vmax < vmin) return 0.0;
  return vmax - vmin;
}

}  // namespace

double modulus_sparse(const StepFunction& f, double delta) {
  const double len = f.domain_hi() - f.domain_lo();
  if (!(delta > 0.0 && delta < len / 2.0)) {
    raise(errc::domain_mismatch, "modulus_sparse needs 0 < delta < (b-a)/2");
  }
  // Candidate cut points: the jumps plus both endpoints.
  std::vector<double> cuts;
  cuts.push_back(f.domain_lo());
  for (double bp : f.breakpoints()) {
    if (bp > f.domain_lo() && bp < f.domain_hi()) cuts.push_back(bp);
  }
  cuts.push_back(f.domain_hi());

  const size_t m = cuts.size();
  const double inf = 1e300;
  std::vector<double> dp(m, inf);
  dp[0] = 0.0;
  for (size_t i = 1; i < m; ++i) {
    bool is_last = i == m - 1;
    for (size_t j = 0; j < i; ++j) {
      if (dp[j] >= inf) continue;
      if (!(cuts[i] - cuts[j] > delta)) continue;  // sparsity: gaps strictly > delta
      double osc = oscillation(f, cuts[j], cuts[i], /*closed_right=*/is_last);
      dp[i] = std::min(dp[i], std::max(dp[j], osc));
    }
  }
  return dp[m - 1];
}

double sup_distance(const StepFunction& f, const StepFunction& g, double window_lo,
                    double window_hi) {
  if (!(window_lo < window_hi)) raise(errc::domain_mismatch, "empty window");
  if (f.domain_lo() > window_lo || f.domain_hi() < window_hi || g.domain_lo() > window_lo ||
      g.domain_hi() < window_hi) {
    raise(errc::domain_mismatch, "window not covered by both domains");
  }
  std::set<double> pts{window_lo, window_hi};
  for (double bp : f.breakpoints()) {
    if (bp >= window_lo && bp <= window_hi) pts.insert(bp);
  }
  for (double bp : g.breakpoints()) {
    if (bp >= window_lo && bp <= window_hi) pts.insert(bp);
  }
  double best = 0.0;
  for (double x : pts) best = std::max(best, std::abs(f(x) - g(x)));
  return best;
}

}  // namespace mclt
