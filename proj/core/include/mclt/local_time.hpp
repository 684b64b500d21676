#pragma once

#include <map>

#include "mclt/sampler.hpp"
#include "mclt/step_function.hpp"

namespace mclt {

// L_n(x) = #{ k <= n : S_k = x }.
long long local_time_count(const PathSample& path, long long n, long long x);

// Diffusively rescaled visit counts: l_n(t, x) = L_{floor(nt)}(floor(sqrt(n) x)) / sqrt(n).
// counts is keyed by the integer site floor(sqrt(n) x); the profile is
// constant on cells [j/sqrt(n), (j+1)/sqrt(n)).
struct LocalTimeProfile {
  long long n = 0;
  double t = 0.0;
  std::map<long long, long long> counts;

  long long total_count() const;           // == floor(n*t) + 1
  double value_at_site(long long site) const;  // counts(site)/sqrt(n)
  double value(double x) const;            // l_n(t, x)
  // Profile as a step function in x on [lo, hi]; sites outside counts carry 0.
  StepFunction to_step_function(double lo, double hi) const;
};

LocalTimeProfile normalized_profile(const PathSample& path, long long n, double t);

// Exact integral of the profile over [a, b): sum of value * overlap per cell.
double profile_integral(const LocalTimeProfile& profile, double a, double b);

// Per-path occupation identity data: the two boundary-cell integrals of the
// profile around a and b that bound |Lambda_n([a,b)) - int_a^b t_n| (with the
// occupation measure taken on the extended clock, see walk_occupation_clock).
struct OccupationIdentityCheck {
  double occupation = 0.0;
  double profile_int = 0.0;
  double boundary_bound = 0.0;  // integral over cell(a) + integral over cell(b)
  bool holds = false;
};

OccupationIdentityCheck occupation_identity_check(const PathSample& path, double a, double b);

}  // namespace mclt
