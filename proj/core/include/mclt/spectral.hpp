#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mclt/chain.hpp"

namespace mclt {

// Q(t): complex |S|x|S| matrix with entry (x,y) = P(x,y) * exp(i*t*s_y).
// Q(0) equals P exactly; every entry has modulus <= the matching P entry and
// row-wise modulus sums are 1, so rho(Q(t)) <= 1 for all t.
struct CharOperator {
  double t = 0.0;
  Eigen::MatrixXcd entries;
};

CharOperator q_operator(const MarkovChain& chain, double t);

// Max modulus over all eigenvalues (dense solve). Throws eigen_failure if the
// solver does not converge.
double spectral_radius(const CharOperator& op);

struct EigenSample {
  double t = 0.0;
  std::complex<double> lambda;
  // |lambda| minus the max modulus of the remaining eigenvalues.
  double gap = 0.0;
  // Operator-norm distance of the leading spectral projection from its t=0 value.
  double proj_deviation = 0.0;
};

struct EigenCurve {
  std::vector<EigenSample> samples;
};

// Tracks the eigenvalue branch through lambda(0)=1 along the grid. The grid
// must be sorted and contain 0; spacing <= 0.01 keeps the continuation
// unambiguous for generic chains. Throws tracking_lost when two candidate
// branches are indistinguishable both by value (within 1e-12) and by
// eigenvector overlap.
EigenCurve leading_eigen_curve(const MarkovChain& chain, const std::vector<double>& t_grid);

enum class SigmaMethod { curvature, autocovariance, monte_carlo };

struct SigmaMcResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

// Asymptotic variance of S_n:
//   curvature       -lambda''(0) by Richardson-extrapolated central differences
//   autocovariance  Var_nu(X_0) + 2 sum_k Cov_nu(X_0, X_k), truncated when
//                   ||N^k|| < 1e-14 for the splitting Pf = E_nu(f) + Nf
//   monte_carlo     Var(S_n)/n from sampled paths
// Throws not_centered when |mean_drift| > 1e-10 and degenerate when the
// result is below 1e-8 (the coboundary case).
double sigma_squared(const MarkovChain& chain, SigmaMethod method);
SigmaMcResult sigma_squared_mc(const MarkovChain& chain, long long n, long long paths,
                               std::uint64_t seed, int workers = 1);

// Lattice description of the solution set of the cycle congruences
// t*W_C == theta*l_C (mod 2pi); see strong_aperiodicity_exact.
struct ExactCertificate {
  bool strongly_aperiodic = false;
  // (W_C, l_C) per fundamental cycle: signed label sum and signed length.
  std::vector<std::array<long long, 2>> fundamental_cycles;
  // Smith diagonal of the constraint matrix rows (W_C, -l_C); 0 marks an
  // unconstrained direction.
  std::array<long long, 2> smith_diag{0, 0};
  // Generator of the t-solution set: t in (2*pi*t_gen_num/t_gen_den) * Z
  // (the whole real line when t_gen_den == 0).
  long long t_gen_num = 0;
  long long t_gen_den = 1;
  // Witness of a nontrivial solution when not strongly aperiodic:
  // t = 2*pi*t_num/t_den, lambda = exp(2*pi*i*theta_num/theta_den).
  long long t_num = 0, t_den = 1;
  long long theta_num = 0, theta_den = 1;
  std::complex<double> lambda{1.0, 0.0};
  std::vector<std::complex<double>> phi;
  std::string summary;
};

struct AperiodicityReport {
  bool is_strongly_aperiodic = false;
  // Max spectral radius of Q(t) over the scanned window [delta, pi].
  double sup_radius = 0.0;
  // Empirical decay rate: sup of rho(Q(t)) over the window.
  double r_delta = 0.0;
  std::optional<double> witness_t;
  std::optional<std::complex<double>> witness_lambda;
  std::optional<Eigen::VectorXcd> witness_phi;
  std::optional<ExactCertificate> exact_certificate;
};

// Thrown when the refined supremum of rho(Q(t)) falls inside
// [1 - margin, 1 - margin/10]: too close to call numerically. The partial
// report is attached; callers should fall back to the exact test.
class InconclusiveNearThreshold : public Error {
 public:
  explicit InconclusiveNearThreshold(AperiodicityReport report)
      : Error(errc::inconclusive_near_threshold,
              "InconclusiveNearThreshold: refined spectral radius within margin band"),
        report(std::move(report)) {}
  AperiodicityReport report;
};

// Scans rho(Q(t)) over t in [delta, pi] (conjugate symmetry covers t < 0),
// refines local maxima above 1 - 10*margin by golden-section search to 1e-10
// in t, and declares strong aperiodicity iff the refined supremum stays below
// 1 - margin.
AperiodicityReport strong_aperiodicity_numeric(const MarkovChain& chain, double delta,
                                               double grid_step = 1e-3, double margin = 1e-6);

// Exact decision of strong aperiodicity in integer arithmetic.
//
// Writing lambda = exp(i*theta) and phi(x) = exp(i*alpha(x)), the defining
// equation e^{i t s_y} = lambda * phi(x)/phi(y) on positive-probability edges
// forces, around every cycle C of the transition graph,
//     t * W_C == theta * l_C   (mod 2pi),
// where W_C is the (signed) sum of labels s_y along C and l_C the (signed)
// edge count. Conversely any (t, theta) satisfying all fundamental-cycle
// congruences extends to a valid phi via tree potentials. The solution set
// of {W_C * u - l_C * v in Z} (with t = 2pi*u, theta = 2pi*v) is computed
// from the Smith normal form of the integer matrix with rows (W_C, -l_C);
// the chain is strongly aperiodic iff every solution has u in Z.
std::pair<bool, ExactCertificate> strong_aperiodicity_exact(const MarkovChain& chain);

// True iff all entries of phi have equal modulus within relative tolerance
// 1e-8: the necessary shape of any eigenvector attached to a modulus-one
// eigenvalue of Q(t).
bool verify_peripheral_eigenvector(const Eigen::VectorXcd& phi);

}  // namespace mclt
