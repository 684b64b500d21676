#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mclt/chain.hpp"

namespace mclt {

class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);

  const std::vector<double>& samples() const { return samples_; }
  long long count() const { return static_cast<long long>(samples_.size()); }
  double cdf(double x) const;  // right-continuous empirical cdf
  double mean() const;

 private:
  std::vector<double> samples_;  // sorted ascending
};

// sup_x |F_emp(x) - cdf(x)| with both one-sided gaps evaluated at the sample
// points.
double ks_distance(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf);
double ks_distance_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

// cdf of |N(0,1)| / sigma: the law of the Brownian local time at (t,x)=(1,0)
// for Brownian motion with variance sigma^2.
std::function<double(double)> half_normal_reference(double sigma);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;  // jackknife standard error
};

// Monte Carlo estimate of E[(L_n(x) - L_n(y))^4].
McEstimate fourth_moment_mc(const MarkovChain& chain, long long n, long long x, long long y,
                            long long paths, std::uint64_t seed, int workers = 1);

struct BoundRatio {
  std::string parameters;
  double ratio = 0.0;
};

// Pass/fail record for one lemma-style bound: the observed ratios, their
// empirical constant, and the trend of the ratio against the driving
// parameter.
struct BoundReport {
  std::string lemma_id;
  std::vector<BoundRatio> ratios;
  double c_emp = 0.0;
  double trend_slope = 0.0;
  bool pass = false;
  std::string note;
};

// Estimates P( sup_{|x-y|<delta, x,y in [-m,m]} |t_n(x)-t_n(y)| >= eps ) per
// (n, delta) with m = 3*sigma; the verdict checks that the estimate shrinks
// with delta at the largest n, consistent with a linear-in-delta bound.
BoundReport tightness_report(const MarkovChain& chain, const std::vector<long long>& n_list,
                             const std::vector<double>& delta_list, double eps, long long paths,
                             std::uint64_t seed, int workers = 1);

struct ConvergenceRow {
  long long n = 0;
  double t = 0.0;
  double x = 0.0;
  long long paths = 0;
  double ks_vs_brownian = 0.0;
  double ks_vs_half_normal = -1.0;  // filled at (t,x) = (1,0) only
  bool out_of_range = false;        // x unreachable by the rescaled walk
};

struct TailRow {
  long long n = 0;
  double a = 0.0;
  double prob = 0.0;  // P( sup_{x in [-m,m]} t_n(x) >= a )
};

struct ConvergenceReport {
  double sigma = 0.0;
  double m = 0.0;
  long long brownian_mesh = 0;
  double eps_band = 0.0;
  std::vector<ConvergenceRow> rows;
  std::vector<TailRow> tails;
};

// Empirical law of l_n(t,x) per eval point and n, compared by KS distance
// against a Brownian local-time reference simulated at the same sigma.
// Throws not_strongly_aperiodic / degenerate when the chain is outside the
// theorem's hypotheses.
ConvergenceReport convergence_report(const MarkovChain& chain, const std::vector<long long>& n_list,
                                     const std::vector<std::pair<double, double>>& eval_points,
                                     long long paths, std::uint64_t seed, int workers = 1,
                                     long long brownian_mesh = 20000, double eps_band = 0.01);

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mclt
