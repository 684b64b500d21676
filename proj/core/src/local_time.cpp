#include "mclt/local_time.hpp"

#include <algorithm>
#include <cmath>

namespace mclt {

long long local_time_count(const PathSample& path, long long n, long long x) {
  if (n > path.n()) raise(errc::config_invalid, "local_time_count: n exceeds path length");
  long long count = 0;
  for (long long k = 0; k <= n; ++k) {
    if (path.sums[static_cast<size_t>(k)] == x) ++count;
  }
  return count;
}

long long LocalTimeProfile::total_count() const {
  long long total = 0;
  for (const auto& [site, c] : counts) total += c;
  return total;
}

double LocalTimeProfile::value_at_site(long long site) const {
  auto it = counts.find(site);
  if (it == counts.end()) return 0.0;
  return static_cast<double>(it->second) / std::sqrt(static_cast<double>(n));
}

double LocalTimeProfile::value(double x) const {
  return value_at_site(static_cast<long long>(
      std::floor(std::sqrt(static_cast<double>(n)) * x)));
}

StepFunction LocalTimeProfile::to_step_function(double lo, double hi) const {
  const double root_n = std::sqrt(static_cast<double>(n));
  // Cut points: the edges of occupied cells, clipped to the window.
  std::vector<double> cuts;
  for (const auto& [site, c] : counts) {
    double left = static_cast<double>(site) / root_n;
    double right = static_cast<double>(site + 1) / root_n;
    if (right > lo && left < hi) {
      if (left > lo) cuts.push_back(left);
      if (right < hi || right == hi) cuts.push_back(right);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  while (!cuts.empty() && cuts.front() <= lo) cuts.erase(cuts.begin());
  std::vector<double> values;
  double prev = lo;
  for (double c : cuts) {
    values.push_back(value(0.5 * (prev + c)));
    prev = c;
  }
  values.push_back(prev < hi ? value(0.5 * (prev + hi)) : value_at_site(static_cast<long long>(
                                    std::floor(root_n * hi))));
  return StepFunction(lo, hi, std::move(cuts), std::move(values));
}

LocalTimeProfile normalized_profile(const PathSample& path, long long n, double t) {
  if (!(t >= 0.0 && t <= 1.0)) raise(errc::config_invalid, "normalized_profile: t in [0,1]");
  if (n > path.n()) raise(errc::config_invalid, "normalized_profile: n exceeds path length");
  LocalTimeProfile profile;
  profile.n = n;
  profile.t = t;
  const long long horizon = static_cast<long long>(
      std::floor(t * static_cast<double>(n)));
  for (long long k = 0; k <= horizon; ++k) {
    profile.counts[path.sums[static_cast<size_t>(k)]] += 1;
  }
  return profile;
}

double profile_integral(const LocalTimeProfile& profile, double a, double b) {
  if (a >= b) return 0.0;
  const double root_n = std::sqrt(static_cast<double>(profile.n));
  double total = 0.0;
  for (const auto& [site, c] : profile.counts) {
    double left = static_cast<double>(site) / root_n;
    double right = static_cast<double>(site + 1) / root_n;
    double overlap = std::min(right, b) - std::max(left, a);
    if (overlap > 0.0) {
      total += (static_cast<double>(c) / root_n) * overlap;
    }
  }
  return total;
}

OccupationIdentityCheck occupation_identity_check(const PathSample& path, double a, double b) {
  const long long n = path.n();
  LocalTimeProfile profile = normalized_profile(path, n, 1.0);
  StepFunction clock = walk_occupation_clock(path);

  OccupationIdentityCheck out;
  out.occupation = occupation_measure(clock, a, b);
  out.profile_int = profile_integral(profile, a, b);
  const double root_n = std::sqrt(static_cast<double>(n));
  long long ja = static_cast<long long>(std::floor(root_n * a));
  long long jb = static_cast<long long>(std::floor(root_n * b));
  out.boundary_bound =
      (profile.value_at_site(ja) + profile.value_at_site(jb)) / root_n;
  out.holds = std::abs(out.occupation - out.profile_int) <= out.boundary_bound + 1e-9;
  return out;
}

}  // namespace mclt
