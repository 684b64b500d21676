#include "mclt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mclt/local_time.hpp"
#include "mclt/parallel.hpp"
#include "mclt/sampler.hpp"
#include "mclt/spectral.hpp"

namespace mclt {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
  if (samples_.empty()) raise(errc::config_invalid, "empirical distribution needs samples");
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::mean() const {
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
         static_cast<double>(samples_.size());
}

double ks_distance(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf) {
  const auto& xs = emp.samples();
  const double n = static_cast<double>(xs.size());
  double best = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double f = cdf(xs[i]);
    best = std::max(best, std::abs(static_cast<double>(i + 1) / n - f));
    best = std::max(best, std::abs(f - static_cast<double>(i) / n));
  }
  return best;
}

double ks_distance_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& xa = a.samples();
  const auto& xb = b.samples();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  double best = 0.0;
  size_t i = 0, j = 0;
  while (i < xa.size() || j < xb.size()) {
    double x = (j >= xb.size() || (i < xa.size() && xa[i] <= xb[j])) ? xa[i] : xb[j];
    while (i < xa.size() && xa[i] <= x) ++i;
    while (j < xb.size() && xb[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

std::function<double(double)> half_normal_reference(double sigma) {
  if (!(sigma > 0.0)) raise(errc::config_invalid, "half_normal_reference: sigma > 0");
  return [sigma](double x) {
    if (x <= 0.0) return 0.0;
    return std::erf(sigma * x / std::sqrt(2.0));
  };
}

namespace {

double jackknife_stderr(const std::vector<double>& values) {
  const size_t m = values.size();
  if (m < 2) return 0.0;
  double total = std::accumulate(values.begin(), values.end(), 0.0);
  double mean_jack = 0.0;
  std::vector<double> theta(m);
  for (size_t i = 0; i < m; ++i) {
    theta[i] = (total - values[i]) / static_cast<double>(m - 1);
    mean_jack += theta[i];
  }
  mean_jack /= static_cast<double>(m);
  double ss = 0.0;
  for (double t : theta) ss += (t - mean_jack) * (t - mean_jack);
  return std::sqrt(ss * static_cast<double>(m - 1) / static_cast<double>(m));
}

}  // namespace

McEstimate fourth_moment_mc(const MarkovChain& chain, long long n, long long x, long long y,
                            long long paths, std::uint64_t seed, int workers) {
  if (paths < 1) raise(errc::config_invalid, "fourth_moment_mc: paths >= 1");
  ChainSamplingTables tables(chain);
  std::vector<double> vals(static_cast<size_t>(paths));
  parallel_for(static_cast<size_t>(paths), workers, [&](size_t i) {
    RngStream rng = path_stream(seed, i);
    int state = tables.sample_initial(rng);
    long long sum = tables.labels[static_cast<size_t>(state)];
    long long cx = sum == x ? 1 : 0;
    long long cy = sum == y ? 1 : 0;
    for (long long k = 1; k <= n; ++k) {
      state = tables.sample_step(state, rng);
      sum += tables.labels[static_cast<size_t>(state)];
      if (sum == x) ++cx;
      if (sum == y) ++cy;
    }
    double d = static_cast<double>(cx - cy);
    vals[i] = d * d * d * d;
  });
  McEstimate out;
  out.estimate = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(paths);
  out.stderr_ = jackknife_stderr(vals);
  return out;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n != y.size() || n < 2) raise(errc::config_invalid, "regression needs matched series");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

BoundReport tightness_report(const MarkovChain& chain, const std::vector<long long>& n_list,
                             const std::vector<double>& delta_list, double eps, long long paths,
                             std::uint64_t seed, int workers) {
  for (double d : delta_list) {
    if (!(d > 0.0 && d < 0.5)) raise(errc::config_invalid, "deltas must lie in (0, 1/2)");
  }
  if (n_list.empty() || delta_list.empty()) {
    raise(errc::config_invalid, "tightness_report: empty parameter list");
  }
  double sigma = std::sqrt(sigma_squared(chain, SigmaMethod::autocovariance));
  double m = 3.0 * sigma;
  ChainSamplingTables tables(chain);

  std::vector<double> deltas = delta_list;
  std::sort(deltas.begin(), deltas.end());

  BoundReport report;
  report.lemma_id = "tightness-modulus";
  std::vector<double> est_at_largest(deltas.size(), 0.0), se_at_largest(deltas.size(), 0.0);

  for (size_t ni = 0; ni < n_list.size(); ++ni) {
    long long n = n_list[ni];
    std::vector<std::vector<char>> exceeded(
        deltas.size(), std::vector<char>(static_cast<size_t>(paths), 0));
    parallel_for(static_cast<size_t>(paths), workers, [&](size_t p) {
      RngStream rng = path_stream(seed, ni * static_cast<size_t>(paths) + p);
      int state = tables.sample_initial(rng);
      long long sum = tables.labels[static_cast<size_t>(state)];
      LocalTimeProfile profile;
      profile.n = n;
      profile.t = 1.0;
      profile.counts[sum] += 1;
      for (long long k = 1; k <= n; ++k) {
        state = tables.sample_step(state, rng);
        sum += tables.labels[static_cast<size_t>(state)];
        profile.counts[sum] += 1;
      }
      StepFunction f = profile.to_step_function(-m, m);
      for (size_t di = 0; di < deltas.size(); ++di) {
        if (modulus(f, deltas[di]) >= eps) exceeded[di][p] = 1;
      }
    });
    for (size_t di = 0; di < deltas.size(); ++di) {
      double cnt = 0.0;
      for (char c : exceeded[di]) cnt += c;
      double est = cnt / static_cast<double>(paths);
      BoundRatio r;
      r.parameters = "n=" + std::to_string(n) + " delta=" + std::to_string(deltas[di]);
      r.ratio = est / deltas[di];
      report.ratios.push_back(r);
      report.c_emp = std::max(report.c_emp, r.ratio);
      if (ni == n_list.size() - 1) {
        est_at_largest[di] = est;
        se_at_largest[di] = std::sqrt(std::max(est * (1.0 - est), 1e-12) /
                                      static_cast<double>(paths));
      }
    }
  }

  // Verdict: at the largest n the exceedance probability must not grow as
  // delta shrinks, up to 2 SE of binomial noise.
  bool pass = true;
  for (size_t di = 0; di + 1 < deltas.size(); ++di) {
    double slack = 2.0 * (se_at_largest[di] + se_at_largest[di + 1]);
    if (est_at_largest[di] > est_at_largest[di + 1] + slack) pass = false;
  }
  {
    std::vector<double> xs(deltas.begin(), deltas.end());
    std::vector<double> ys(est_at_largest.begin(), est_at_largest.end());
    if (xs.size() >= 2) report.trend_slope = regression_slope(xs, ys);
  }
  report.pass = pass;
  report.note = "P(sup_{|x-y|<delta} |t_n(x)-t_n(y)| >= eps) vs delta at n = " +
                std::to_string(n_list.back()) + ", eps = " + std::to_string(eps) +
                ", m = 3*sigma";
  return report;
}

ConvergenceReport convergence_report(const MarkovChain& chain, const std::vector<long long>& n_list,
                                     const std::vector<std::pair<double, double>>& eval_points,
                                     long long paths, std::uint64_t seed, int workers,
                                     long long brownian_mesh, double eps_band) {
  if (n_list.empty() || eval_points.empty()) {
    raise(errc::config_invalid, "convergence_report: empty parameter list");
  }
  auto [aperiodic, cert] = strong_aperiodicity_exact(chain);
  if (!aperiodic) {
    raise(errc::not_strongly_aperiodic,
          "chain fails the strong aperiodicity test (" + cert.summary + ")");
  }
  double s2 = sigma_squared(chain, SigmaMethod::autocovariance);
  double sigma = std::sqrt(s2);
  const double m = 3.0 * sigma;

  ConvergenceReport report;
  report.sigma = sigma;
  report.m = m;
  report.brownian_mesh = brownian_mesh;
  report.eps_band = eps_band;

  // Brownian local-time reference, one sample set per eval point, shared
  // across n.
  std::vector<std::vector<double>> ref(eval_points.size(),
                                       std::vector<double>(static_cast<size_t>(paths)));
  const std::uint64_t brownian_seed = mix64(seed ^ 0xb10bb10bULL);
  parallel_for(static_cast<size_t>(paths), workers, [&](size_t i) {
    BrownianPath bp = brownian_path(sigma, brownian_mesh, mix64(brownian_seed + i));
    for (size_t p = 0; p < eval_points.size(); ++p) {
      ref[p][i] = brownian_local_time(bp, eval_points[p].first, eval_points[p].second, eps_band);
    }
  });
  std::vector<EmpiricalDistribution> ref_dist;
  ref_dist.reserve(eval_points.size());
  for (auto& r : ref) ref_dist.emplace_back(std::move(r));

  const std::vector<double> tail_grid = {0.5 / sigma, 1.0 / sigma, 1.5 / sigma,
                                         2.0 / sigma, 2.5 / sigma, 3.0 / sigma};
  ChainSamplingTables tables(chain);

  for (size_t ni = 0; ni < n_list.size(); ++ni) {
    long long n = n_list[ni];
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<long long> sites(eval_points.size());
    std::vector<long long> horizons(eval_points.size());
    for (size_t p = 0; p < eval_points.size(); ++p) {
      sites[p] = static_cast<long long>(std::floor(root_n * eval_points[p].second));
      horizons[p] = static_cast<long long>(std::floor(
          eval_points[p].first * static_cast<double>(n)));
    }
    const long long window_site = static_cast<long long>(std::floor(m * root_n));

    std::vector<std::vector<double>> samples(eval_points.size(),
                                             std::vector<double>(static_cast<size_t>(paths)));
    std::vector<double> sup_window(static_cast<size_t>(paths), 0.0);

    parallel_for(static_cast<size_t>(paths), workers, [&](size_t i) {
      RngStream rng = path_stream(seed, ni * static_cast<size_t>(paths) + i);
      std::vector<long long> counts(static_cast<size_t>(2 * window_site + 1), 0);
      std::vector<long long> point_counts(eval_points.size(), 0);
      int state = tables.sample_initial(rng);
      long long sum = tables.labels[static_cast<size_t>(state)];
      long long best_window = 0;
      auto visit = [&](long long k, long long s) {
        if (std::llabs(s) <= window_site) {
          long long c = ++counts[static_cast<size_t>(s + window_site)];
          best_window = std::max(best_window, c);
        }
        for (size_t p = 0; p < eval_points.size(); ++p) {
          if (k <= horizons[p] && s == sites[p]) ++point_counts[p];
        }
      };
      visit(0, sum);
      for (long long k = 1; k <= n; ++k) {
        state = tables.sample_step(state, rng);
        sum += tables.labels[static_cast<size_t>(state)];
        visit(k, sum);
      }
      for (size_t p = 0; p < eval_points.size(); ++p) {
        samples[p][i] = static_cast<double>(point_counts[p]) / root_n;
      }
      sup_window[i] = static_cast<double>(best_window) / root_n;
    });

    for (size_t p = 0; p < eval_points.size(); ++p) {
      EmpiricalDistribution emp(std::move(samples[p]));
      ConvergenceRow row;
      row.n = n;
      row.t = eval_points[p].first;
      row.x = eval_points[p].second;
      row.paths = paths;
      row.ks_vs_brownian = ks_distance_two_sample(emp, ref_dist[p]);
      if (eval_points[p].first == 1.0 && eval_points[p].second == 0.0) {
        row.ks_vs_half_normal = ks_distance(emp, half_normal_reference(sigma));
      }
      row.out_of_range =
          std::llabs(sites[p]) > chain.max_abs_label() * (n + 1);
      report.rows.push_back(row);
    }
    for (double a : tail_grid) {
      TailRow tr;
      tr.n = n;
      tr.a = a;
      double cnt = 0.0;
      for (double s : sup_window) {
        if (s >= a) cnt += 1.0;
      }
      tr.prob = cnt / static_cast<double>(paths);
      report.tails.push_back(tr);
    }
  }
  return report;
}

}  // namespace mclt
