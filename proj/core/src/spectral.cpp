#include "mclt/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "mclt/parallel.hpp"
#include "mclt/sampler.hpp"

namespace mclt {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd eigenvalues_of(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    raise(errc::eigen_failure, "dense eigensolver did not converge");
  }
  return solver.eigenvalues();
}

struct EigenPairs {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};

EigenPairs eigenpairs_of(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    raise(errc::eigen_failure, "dense eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

// Spectral projection onto the (simple) eigenvalue nearest `lambda`:
// Pi = v w^T / (w^T v) with v, w the right and left eigenvectors.
Eigen::MatrixXcd leading_projection(const Eigen::MatrixXcd& q, std::complex<double> lambda) {
  EigenPairs right = eigenpairs_of(q);
  EigenPairs left = eigenpairs_of(q.transpose());
  int ri = 0, li = 0;
  double rb = 1e300, lb = 1e300;
  for (int i = 0; i < right.values.size(); ++i) {
    double d = std::abs(right.values(i) - lambda);
    if (d < rb) { rb = d; ri = i; }
  }
  for (int i = 0; i < left.values.size(); ++i) {
    double d = std::abs(left.values(i) - lambda);
    if (d < lb) { lb = d; li = i; }
  }
  Eigen::VectorXcd v = right.vectors.col(ri);
  Eigen::VectorXcd w = left.vectors.col(li);
  std::complex<double> denom = (w.transpose() * v)(0);
  if (std::abs(denom) < 1e-14) {
    raise(errc::eigen_failure, "leading projection is numerically defective");
  }
  return (v * w.transpose()) / denom;
}

}  // namespace

CharOperator q_operator(const MarkovChain& chain, double t) {
  if (!std::isfinite(t)) raise(errc::config_invalid, "q_operator: t must be finite");
  const int n = chain.size();
  CharOperator op;
  op.t = t;
  op.entries.resize(n, n);
  for (int y = 0; y < n; ++y) {
    std::complex<double> phase =
        std::polar(1.0, t * static_cast<double>(chain.label(y)));
    for (int x = 0; x < n; ++x) {
      op.entries(x, y) = chain.transition()(x, y) * phase;
    }
  }
  return op;
}

double spectral_radius(const CharOperator& op) {
  if (op.entries.size() == 0) return 0.0;
  return eigenvalues_of(op.entries).cwiseAbs().maxCoeff();
}

EigenCurve leading_eigen_curve(const MarkovChain& chain, const std::vector<double>& t_grid) {
  if (t_grid.empty()) raise(errc::config_invalid, "t_grid is empty");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    raise(errc::config_invalid, "t_grid must be sorted");
  }
  auto zero_it = std::find_if(t_grid.begin(), t_grid.end(),
                              [](double t) { return std::abs(t) < 1e-15; });
  if (zero_it == t_grid.end()) raise(errc::config_invalid, "t_grid must contain 0");
  const size_t zero_idx = static_cast<size_t>(zero_it - t_grid.begin());
  const int n = chain.size();

  EigenCurve curve;
  curve.samples.resize(t_grid.size());

  // Anchor at t = 0: the Perron eigenvalue 1 with eigenvector 1.
  EigenPairs at0 = eigenpairs_of(q_operator(chain, 0.0).entries);
  int best0 = 0;
  double bd = 1e300;
  for (int i = 0; i < at0.values.size(); ++i) {
    double d = std::abs(at0.values(i) - 1.0);
    if (d < bd) { bd = d; best0 = i; }
  }
  Eigen::MatrixXcd pi0 = leading_projection(q_operator(chain, 0.0).entries, at0.values(best0));

  auto record = [&](size_t idx, std::complex<double> lambda, const Eigen::VectorXcd&,
                    const EigenPairs& pairs, int chosen) {
    double others = 0.0;
    for (int i = 0; i < pairs.values.size(); ++i) {
      if (i != chosen) others = std::max(others, std::abs(pairs.values(i)));
    }
    EigenSample s;
    s.t = t_grid[idx];
    s.lambda = lambda;
    s.gap = n == 1 ? std::abs(lambda) : std::abs(lambda) - others;
    Eigen::MatrixXcd pi = leading_projection(q_operator(chain, t_grid[idx]).entries, lambda);
    s.proj_deviation = spectral_norm(pi - pi0);
    curve.samples[idx] = s;
  };

  // Continuation: eigenvector overlap is the primary key, value distance the
  // tie-break. Value distance alone cannot cross a branch collision (the
  // rank-one example has an exact crossing where both candidates sit at the
  // same value), while the tracked eigenvector stays well defined through it.
  auto step = [&](size_t idx, std::complex<double> prev_lambda,
                  const Eigen::VectorXcd& prev_vec) -> std::pair<std::complex<double>, Eigen::VectorXcd> {
    EigenPairs pairs = eigenpairs_of(q_operator(chain, t_grid[idx]).entries);
    int m = static_cast<int>(pairs.values.size());
    int best = 0;
    double best_overlap = -1.0, second_overlap = -1.0;
    for (int i = 0; i < m; ++i) {
      double ov = std::abs(prev_vec.adjoint().dot(pairs.vectors.col(i)));
      if (ov > best_overlap) {
        second_overlap = best_overlap;
        best_overlap = ov;
        best = i;
      } else if (ov > second_overlap) {
        second_overlap = ov;
      }
    }
    if (m > 1 && best_overlap - second_overlap < 1e-9) {
      // Overlap is inconclusive; fall back to nearest value.
      int near = 0, near2 = 1;
      double d1 = 1e300, d2 = 1e300;
      for (int i = 0; i < m; ++i) {
        double d = std::abs(pairs.values(i) - prev_lambda);
        if (d < d1) { d2 = d1; near2 = near; d1 = d; near = i; }
        else if (d < d2) { d2 = d; near2 = i; }
      }
      if (std::abs(pairs.values(near) - pairs.values(near2)) < 1e-12 &&
          d2 - d1 < 1e-12) {
        raise(errc::tracking_lost, "two eigenvalue branches within 1e-12 at t = " +
                                       std::to_string(t_grid[idx]));
      }
      best = near;
    }
    record(idx, pairs.values(best), pairs.vectors.col(best), pairs, best);
    return {pairs.values(best), pairs.vectors.col(best)};
  };

  record(zero_idx, at0.values(best0), at0.vectors.col(best0), at0, best0);

  std::complex<double> lam = at0.values(best0);
  Eigen::VectorXcd vec = at0.vectors.col(best0);
  for (size_t i = zero_idx + 1; i < t_grid.size(); ++i) {
    std::tie(lam, vec) = step(i, lam, vec);
  }
  lam = at0.values(best0);
  vec = at0.vectors.col(best0);
  for (size_t i = zero_idx; i-- > 0;) {
    std::tie(lam, vec) = step(i, lam, vec);
  }
  return curve;
}

namespace {

// Leading eigenvalue near t = 0 (unique branch through 1 for small |t|).
std::complex<double> lambda_near_one(const MarkovChain& chain, double t) {
  Eigen::VectorXcd vals = eigenvalues_of(q_operator(chain, t).entries);
  int best = 0;
  double bd = 1e300;
  for (int i = 0; i < vals.size(); ++i) {
    double d = std::abs(vals(i) - 1.0);
    if (d < bd) { bd = d; best = i; }
  }
  return vals(best);
}

double sigma_sq_curvature(const MarkovChain& chain) {
  // Re lambda is even in t, so the symmetric second difference reduces to
  // D(h) = 2 (Re lambda(h) - 1) / h^2 = -sigma^2 + c h^2 + O(h^4); Richardson
  // over h in {1e-3, 1e-4} removes the h^2 term.
  auto second_diff = [&](double h) {
    return 2.0 * (lambda_near_one(chain, h).real() - 1.0) / (h * h);
  };
  double d1 = second_diff(1e-3);
  double d2 = second_diff(1e-4);
  double extrapolated = (100.0 * d2 - d1) / 99.0;
  return -extrapolated;
}

double sigma_sq_autocovariance(const MarkovChain& chain) {
  const int n = chain.size();
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = static_cast<double>(chain.label(i));
  const Eigen::VectorXd& nu = chain.stationary();
  double drift = nu.dot(s);
  double var = nu.dot(s.cwiseProduct(s)) - drift * drift;

  // Pf = E_nu(f) + Nf with N = P - 1 nu^T; Cov(X_0, X_k) = nu^T diag(s) N^k s.
  Eigen::MatrixXd N = chain.transition() - Eigen::VectorXd::Ones(n) * nu.transpose();
  Eigen::MatrixXd Nk = N;
  double acc = 0.0;
  for (int k = 1; k <= 100000; ++k) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Nk);
    if (svd.singularValues()(0) < 1e-14) break;
    double cov = (nu.asDiagonal() * (Nk * s)).dot(s);
    acc += cov;
    Nk = N * Nk;
    if (k == 100000) raise(errc::eigen_failure, "autocovariance series did not decay");
  }
  return var + 2.0 * acc;
}

}  // namespace

SigmaMcResult sigma_squared_mc(const MarkovChain& chain, long long n, long long paths,
                               std::uint64_t seed, int workers) {
  ChainSamplingTables tables(chain);
  std::vector<double> terminal(static_cast<size_t>(paths));
  parallel_for(static_cast<size_t>(paths), workers, [&](size_t i) {
    RngStream rng = path_stream(seed, i);
    terminal[i] = static_cast<double>(sample_terminal_sum(tables, n, rng)) /
                  std::sqrt(static_cast<double>(n));
  });
  double mean = 0.0;
  for (double v : terminal) mean += v;
  mean /= static_cast<double>(paths);
  double m2 = 0.0, m4 = 0.0;
  for (double v : terminal) {
    double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(paths);
  m4 /= static_cast<double>(paths);
  SigmaMcResult out;
  out.estimate = m2 * static_cast<double>(paths) / static_cast<double>(paths - 1);
  out.stderr_ = std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(paths));
  return out;
}

double sigma_squared(const MarkovChain& chain, SigmaMethod method) {
  double drift = mean_drift(chain);
  if (std::abs(drift) > kDriftTol) {
    raise(errc::not_centered, "mean drift " + std::to_string(drift));
  }
  double value = 0.0;
  switch (method) {
    case SigmaMethod::curvature: value = sigma_sq_curvature(chain); break;
    case SigmaMethod::autocovariance: value = sigma_sq_autocovariance(chain); break;
    case SigmaMethod::monte_carlo:
      value = sigma_squared_mc(chain, 10000, 10000, 0x5eedULL, 0).estimate;
      break;
  }
  if (value < 1e-8) {
    raise(errc::degenerate, "sigma^2 = " + std::to_string(value) + " (coboundary case)");
  }
  return value;
}

bool verify_peripheral_eigenvector(const Eigen::VectorXcd& phi) {
  if (phi.size() == 0) return false;
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < phi.size(); ++i) {
    double m = std::abs(phi(i));
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  if (hi == 0.0) return false;
  return (hi - lo) / hi <= 1e-8;
}

namespace {

double rho_at(const MarkovChain& chain, double t) {
  return spectral_radius(q_operator(chain, t));
}

// Golden-section maximization of rho(Q(t)) on [a, b] to 1e-10 in t.
double golden_refine(const MarkovChain& chain, double a, double b, double* arg) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = rho_at(chain, x1);
  double f2 = rho_at(chain, x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = rho_at(chain, x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = rho_at(chain, x1);
    }
  }
  double mid = 0.5 * (a + b);
  double fm = rho_at(chain, mid);
  if (f1 > fm) { fm = f1; mid = x1; }
  if (f2 > fm) { fm = f2; mid = x2; }
  if (arg) *arg = mid;
  return fm;
}

}  // namespace

AperiodicityReport strong_aperiodicity_numeric(const MarkovChain& chain, double delta,
                                               double grid_step, double margin) {
  if (!(delta > 0.0 && delta < kPi)) raise(errc::config_invalid, "need 0 < delta < pi");
  if (!(grid_step > 0.0 && grid_step <= 1e-3)) {
    raise(errc::config_invalid, "grid_step must be in (0, 1e-3]");
  }
  if (!(margin > 0.0)) raise(errc::config_invalid, "margin must be positive");

  const long long count = static_cast<long long>(std::ceil((kPi - delta) / grid_step)) + 1;
  std::vector<double> ts(static_cast<size_t>(count));
  std::vector<double> rho(static_cast<size_t>(count));
  for (long long i = 0; i < count; ++i) {
    double t = delta + static_cast<double>(i) * grid_step;
    ts[static_cast<size_t>(i)] = std::min(t, kPi);
  }
  ts.back() = kPi;
  for (size_t i = 0; i < ts.size(); ++i) rho[i] = rho_at(chain, ts[i]);

  double sup = 0.0, sup_t = ts[0];
  for (size_t i = 0; i < ts.size(); ++i) {
    if (rho[i] > sup) { sup = rho[i]; sup_t = ts[i]; }
  }

  // Refine every local maximum that pokes above 1 - 10*margin.
  const double refine_floor = 1.0 - 10.0 * margin;
  for (size_t i = 0; i < ts.size(); ++i) {
    bool left_ok = i == 0 || rho[i] >= rho[i - 1];
    bool right_ok = i + 1 == ts.size() || rho[i] >= rho[i + 1];
    if (!(left_ok && right_ok) || rho[i] <= refine_floor) continue;
    double lo = i == 0 ? std::max(delta, ts[i] - grid_step) : ts[i - 1];
    double hi = i + 1 == ts.size() ? ts[i] : ts[i + 1];
    double arg = ts[i];
    double refined = hi > lo ? golden_refine(chain, lo, hi, &arg) : rho[i];
    if (refined > sup) { sup = refined; sup_t = arg; }
  }

  AperiodicityReport report;
  report.sup_radius = sup;
  report.r_delta = sup;
  report.is_strongly_aperiodic = sup < 1.0 - margin;
  if (!report.is_strongly_aperiodic) {
    EigenPairs pairs = eigenpairs_of(q_operator(chain, sup_t).entries);
    int best = 0;
    double bm = -1.0;
    for (int i = 0; i < pairs.values.size(); ++i) {
      double m = std::abs(pairs.values(i));
      if (m > bm) { bm = m; best = i; }
    }
    report.witness_t = sup_t;
    report.witness_lambda = pairs.values(best);
    report.witness_phi = pairs.vectors.col(best);
  }
  if (sup >= 1.0 - margin && sup < 1.0 - margin / 10.0) {
    throw InconclusiveNearThreshold(report);
  }
  return report;
}

}  // namespace mclt
