#include "mclt/chain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mclt {

const char* errc_name(errc code) {
  switch (code) {
    case errc::non_stochastic: return "NonStochastic";
    case errc::duplicate_state: return "DuplicateState";
    case errc::reducible: return "Reducible";
    case errc::periodic_matrix: return "PeriodicMatrix";
    case errc::bad_distribution: return "BadDistribution";
    case errc::label_out_of_range: return "LabelOutOfRange";
    case errc::eigen_failure: return "EigenFailure";
    case errc::tracking_lost: return "TrackingLost";
    case errc::inconclusive_near_threshold: return "InconclusiveNearThreshold";
    case errc::degenerate: return "Degenerate";
    case errc::not_centered: return "NotCentered";
    case errc::under_resolved: return "UnderResolved";
    case errc::too_large: return "TooLarge";
    case errc::domain_mismatch: return "DomainMismatch";
    case errc::not_strongly_aperiodic: return "NotStronglyAperiodic";
    case errc::config_invalid: return "ConfigInvalid";
  }
  return "Unknown";
}

namespace {

// Reachability over the positive-probability edge set.
std::vector<bool> reachable_from(const Eigen::MatrixXd& P, int start, bool transpose) {
  const int n = static_cast<int>(P.rows());
  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::vector<int> stack{start};
  seen[static_cast<size_t>(start)] = true;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      double p = transpose ? P(v, u) : P(u, v);
      if (p > 0.0 && !seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// Period of a strongly connected graph: gcd over edges (u,v) of
// depth(u) + 1 - depth(v) for any BFS depth assignment.
long long graph_period(const Eigen::MatrixXd& P) {
  const int n = static_cast<int>(P.rows());
  std::vector<long long> depth(static_cast<size_t>(n), -1);
  std::vector<int> queue{0};
  depth[0] = 0;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (int v = 0; v < n; ++v) {
      if (P(u, v) > 0.0 && depth[static_cast<size_t>(v)] < 0) {
        depth[static_cast<size_t>(v)] = depth[static_cast<size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  long long g = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (P(u, v) > 0.0) {
        g = std::gcd(g, depth[static_cast<size_t>(u)] + 1 - depth[static_cast<size_t>(v)]);
      }
    }
  }
  return g == 0 ? 1 : std::llabs(g);
}

Eigen::VectorXd solve_stationary(const Eigen::MatrixXd& P) {
  // Direct linear solve of (P^T - I) nu = 0 with the normalization sum(nu)=1
  // appended as an extra row; least squares via column-pivoted QR.
  const int n = static_cast<int>(P.rows());
  Eigen::MatrixXd A(n + 1, n);
  A.topRows(n) = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.bottomRows(1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b(n) = 1.0;
  Eigen::VectorXd nu = A.colPivHouseholderQr().solve(b);
  // Scrub signed zeros / tiny negatives from rounding, renormalize.
  for (int i = 0; i < n; ++i) nu(i) = std::max(nu(i), 0.0);
  nu /= nu.sum();
  return nu;
}

}  // namespace

MarkovChain MarkovChain::validate(std::vector<long long> states,
                                  Eigen::MatrixXd transition,
                                  Eigen::VectorXd initial) {
  const int n = static_cast<int>(states.size());
  if (n == 0) raise(errc::bad_distribution, "empty state list");
  if (transition.rows() != n || transition.cols() != n) {
    raise(errc::bad_distribution, "transition matrix must be " + std::to_string(n) + "x" +
                                      std::to_string(n));
  }
  if (initial.size() != n) {
    raise(errc::bad_distribution, "initial distribution length mismatch");
  }

  {
    std::set<long long> uniq(states.begin(), states.end());
    if (static_cast<int>(uniq.size()) != n) raise(errc::duplicate_state, "state labels must be distinct");
  }
  for (long long s : states) {
    if (std::llabs(s) > kMaxLabel) {
      raise(errc::label_out_of_range, "state label " + std::to_string(s) + " exceeds bound " +
                                          std::to_string(kMaxLabel));
    }
  }

  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      double p = transition(i, j);
      if (!(p >= 0.0 && p <= 1.0)) {
        raise(errc::non_stochastic, "transition entry (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") outside [0,1]");
      }
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > kStochasticTol) {
      raise(errc::non_stochastic,
            "row " + std::to_string(i) + " sums to " + std::to_string(row_sum));
    }
  }

  double init_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double p = initial(i);
    if (!(p >= 0.0 && p <= 1.0)) raise(errc::bad_distribution, "initial entry outside [0,1]");
    init_sum += p;
  }
  if (std::abs(init_sum - 1.0) > kStochasticTol) {
    raise(errc::bad_distribution, "initial distribution sums to " + std::to_string(init_sum));
  }

  auto fwd = reachable_from(transition, 0, false);
  auto bwd = reachable_from(transition, 0, true);
  for (int i = 0; i < n; ++i) {
    if (!fwd[static_cast<size_t>(i)] || !bwd[static_cast<size_t>(i)]) {
      raise(errc::reducible, "transition graph is not strongly connected");
    }
  }

  long long period = graph_period(transition);
  if (period > 1) {
    raise(errc::periodic_matrix, "transition matrix has period " + std::to_string(period));
  }

  MarkovChain chain;
  chain.states_ = std::move(states);
  chain.transition_ = std::move(transition);
  chain.initial_ = std::move(initial);
  chain.stationary_ = solve_stationary(chain.transition_);

  double resid = (chain.stationary_.transpose() * chain.transition_ -
                  chain.stationary_.transpose())
                     .cwiseAbs()
                     .maxCoeff();
  if (resid > kStationaryTol) {
    raise(errc::eigen_failure, "stationary solve residual " + std::to_string(resid));
  }
  return chain;
}

long long MarkovChain::max_abs_label() const {
  long long m = 0;
  for (long long s : states_) m = std::max(m, std::llabs(s));
  return m;
}

long long MarkovChain::min_label() const {
  return *std::min_element(states_.begin(), states_.end());
}

long long MarkovChain::max_label() const {
  return *std::max_element(states_.begin(), states_.end());
}

int MarkovChain::index_of(long long label) const {
  for (int i = 0; i < size(); ++i) {
    if (states_[static_cast<size_t>(i)] == label) return i;
  }
  return -1;
}

MarkovChain validate_chain(const std::vector<long long>& states,
                           const Eigen::MatrixXd& transition,
                           const Eigen::VectorXd& initial) {
  return MarkovChain::validate(states, transition, initial);
}

const Eigen::VectorXd& stationary_distribution(const MarkovChain& chain) {
  return chain.stationary();
}

double mean_drift(const MarkovChain& chain) {
  double drift = 0.0;
  for (int i = 0; i < chain.size(); ++i) {
    drift += chain.stationary()(i) * static_cast<double>(chain.label(i));
  }
  return drift;
}

MarkovChain chain_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::config_invalid, std::string("chain file is not valid JSON: ") + e.what());
  }
  try {
    std::vector<long long> states = doc.at("states").get<std::vector<long long>>();
    auto rows = doc.at("transition").get<std::vector<std::vector<double>>>();
    auto init = doc.at("initial").get<std::vector<double>>();
    const int n = static_cast<int>(states.size());
    Eigen::MatrixXd P(n, n);
    if (static_cast<int>(rows.size()) != n) {
      raise(errc::bad_distribution, "transition row count mismatch");
    }
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n) {
        raise(errc::bad_distribution, "transition column count mismatch");
      }
      for (int j = 0; j < n; ++j) P(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    Eigen::VectorXd mu(n);
    if (static_cast<int>(init.size()) != n) {
      raise(errc::bad_distribution, "initial length mismatch");
    }
    for (int i = 0; i < n; ++i) mu(i) = init[static_cast<size_t>(i)];
    return MarkovChain::validate(std::move(states), std::move(P), std::move(mu));
  } catch (const nlohmann::json::exception& e) {
    raise(errc::config_invalid, std::string("chain file schema error: ") + e.what());
  }
}

MarkovChain load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::config_invalid, "cannot open chain file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return chain_from_json_text(ss.str());
}

std::string chain_to_json_text(const MarkovChain& chain) {
  nlohmann::json doc;
  doc["states"] = chain.states();
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < chain.size(); ++i) {
    std::vector<double> row;
    for (int j = 0; j < chain.size(); ++j) row.push_back(chain.transition()(i, j));
    rows.push_back(std::move(row));
  }
  doc["transition"] = rows;
  std::vector<double> init;
  for (int i = 0; i < chain.size(); ++i) init.push_back(chain.initial()(i));
  doc["initial"] = init;
  return doc.dump(2);
}

}  // namespace mclt
