#pragma once

#include <vector>

#include "mclt/error.hpp"

namespace mclt {

// Right-continuous step function with finitely many pieces on a closed
// interval [a, b]: piece i takes values[i] on [bp_{i-1}, bp_i), and the last
// piece is closed at b. A breakpoint exactly at b is allowed and makes the
// final piece the singleton {b}, which is how a cadlag jump at the right
// endpoint is carried.
class StepFunction {
 public:
  StepFunction(double a, double b, std::vector<double> breakpoints, std::vector<double> values);

  double domain_lo() const { return a_; }
  double domain_hi() const { return b_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  int piece_count() const { return static_cast<int>(values_.size()); }

  // Left edge (inclusive) and right edge of piece i; the right edge is
  // exclusive except for the final piece.
  double piece_lo(int i) const { return i == 0 ? a_ : breakpoints_[static_cast<size_t>(i - 1)]; }
  double piece_hi(int i) const {
    return i == piece_count() - 1 ? b_ : breakpoints_[static_cast<size_t>(i)];
  }

  double operator()(double x) const;
  double left_limit(double x) const;

 private:
  double a_, b_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// Lebesgue measure of { t : f(t) in [lo, hi) }; exact (sum of piece lengths).
double occupation_measure(const StepFunction& f, double lo, double hi);

// omega_f(delta) = sup over |s-t| < delta of |f(s)-f(t)|, exact.
double modulus(const StepFunction& f, double delta);

// omega'_f(delta): inf over delta-sparse partitions {t_i} (all gaps > delta)
// of the max oscillation on [t_i, t_{i+1}). Exact dynamic program over cut
// points restricted to jump locations plus the endpoints; moving a cut onto
// a jump never increases any interval's oscillation, so the restriction
// attains the infimum (cross-checked by brute force in the tests).
double modulus_sparse(const StepFunction& f, double delta);

// sup |f-g| over [window_lo, window_hi], evaluated on the merged breakpoint
// set. Throws domain_mismatch when either domain does not cover the window.
double sup_distance(const StepFunction& f, const StepFunction& g, double window_lo,
                    double window_hi);

}  // namespace mclt
