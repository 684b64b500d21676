#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "mclt/spectral.hpp"

namespace mclt {

namespace {

using i64 = long long;
using i128 = __int128;

struct ExtGcd {
  i64 g, x, y;  // g = x*a + y*b, g >= 0
};

ExtGcd ext_gcd(i64 a, i64 b) {
  if (b == 0) {
    if (a < 0) return {-a, -1, 0};
    return {a, a == 0 ? 0 : 1, 0};
  }
  ExtGcd sub = ext_gcd(b, a % b);
  return {sub.g, sub.y, sub.x - (a / b) * sub.y};
}

// Exact rational on int64 with 128-bit intermediates; enough headroom for
// cycle data from labels bounded by 1e6.
struct Rat {
  i64 num = 0;
  i64 den = 1;

  static Rat make(i64 n, i64 d) {
    if (d < 0) { n = -n; d = -d; }
    i64 g = std::gcd(std::llabs(n), d);
    if (g > 1) { n /= g; d /= g; }
    return {n, d == 0 ? 1 : d};
  }
  static Rat from128(i128 n, i128 d) {
    if (d < 0) { n = -n; d = -d; }
    i128 a = n < 0 ? -n : n;
    i128 b = d;
    while (b != 0) { i128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    return {static_cast<i64>(n), static_cast<i64>(d)};
  }
  Rat operator+(const Rat& o) const {
    return from128(static_cast<i128>(num) * o.den + static_cast<i128>(o.num) * den,
                   static_cast<i128>(den) * o.den);
  }
  Rat operator-(const Rat& o) const {
    return from128(static_cast<i128>(num) * o.den - static_cast<i128>(o.num) * den,
                   static_cast<i128>(den) * o.den);
  }
  Rat operator*(const Rat& o) const {
    return from128(static_cast<i128>(num) * o.num, static_cast<i128>(den) * o.den);
  }
  Rat scaled(i64 k) const { return from128(static_cast<i128>(num) * k, den); }
  bool is_integer() const { return den == 1; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  // Reduce into [0, 1).
  Rat frac() const {
    i64 m = num % den;
    if (m < 0) m += den;
    return {m, den};
  }
};

struct Edge {
  int from, to;
};

// Node potentials along a spanning tree of the (undirected) support graph:
// A = signed label sum, B = signed edge count from the root. Crossing a
// directed edge (u -> v) forward adds (s_v, 1); crossing it against its
// direction subtracts.
struct TreePotentials {
  std::vector<i64> A, B;
  std::vector<bool> tree_edge;  // per directed edge index
};

TreePotentials build_tree(const MarkovChain& chain, const std::vector<Edge>& edges) {
  const int n = chain.size();
  TreePotentials tp;
  tp.A.assign(static_cast<size_t>(n), 0);
  tp.B.assign(static_cast<size_t>(n), 0);
  tp.tree_edge.assign(edges.size(), false);

  std::vector<bool> seen(static_cast<size_t>(n), false);
  seen[0] = true;
  std::vector<int> queue{0};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (size_t ei = 0; ei < edges.size(); ++ei) {
      const Edge& e = edges[ei];
      if (e.from == u && !seen[static_cast<size_t>(e.to)]) {
        seen[static_cast<size_t>(e.to)] = true;
        tp.tree_edge[ei] = true;
        tp.A[static_cast<size_t>(e.to)] = tp.A[static_cast<size_t>(u)] + chain.label(e.to);
        tp.B[static_cast<size_t>(e.to)] = tp.B[static_cast<size_t>(u)] + 1;
        queue.push_back(e.to);
      } else if (e.to == u && !seen[static_cast<size_t>(e.from)]) {
        seen[static_cast<size_t>(e.from)] = true;
        tp.tree_edge[ei] = true;
        tp.A[static_cast<size_t>(e.from)] = tp.A[static_cast<size_t>(u)] - chain.label(e.to);
        tp.B[static_cast<size_t>(e.from)] = tp.B[static_cast<size_t>(u)] - 1;
        queue.push_back(e.from);
      }
    }
  }
  return tp;
}

// Diagonalize the m x 2 integer constraint matrix: D = U * M * V with U, V
// unimodular and D diagonal (Smith form, d1 | d2). Only V and the diagonal
// are needed to describe the solution set.
struct SmithResult {
  std::array<i64, 2> diag{0, 0};
  std::array<std::array<i64, 2>, 2> V{{{1, 0}, {0, 1}}};
};

SmithResult smith_form(std::vector<std::array<i64, 2>> m) {
  SmithResult out;
  if (m.empty()) return out;
  auto col_op = [&](int dst, int src, i64 q) {  // col_dst -= q * col_src
    for (auto& row : m) row[static_cast<size_t>(dst)] -= q * row[static_cast<size_t>(src)];
    for (auto& row : out.V) row[static_cast<size_t>(dst)] -= q * row[static_cast<size_t>(src)];
  };
  auto col_swap = [&] {
    for (auto& row : m) std::swap(row[0], row[1]);
    for (auto& row : out.V) std::swap(row[0], row[1]);
  };

  for (;;) {
    // Pivot at (0,0): bring the smallest nonzero entry of the matrix there.
    for (;;) {
      size_t bi = m.size();
      int bj = 0;
      i64 best = 0;
      for (size_t i = 0; i < m.size(); ++i) {
        for (int j = 0; j < 2; ++j) {
          i64 v = std::llabs(m[i][static_cast<size_t>(j)]);
          if (v != 0 && (best == 0 || v < best)) { best = v; bi = i; bj = j; }
        }
      }
      if (best == 0) return out;  // zero matrix: both directions unconstrained
      std::swap(m[0], m[bi]);
      if (bj == 1) col_swap();
      if (m[0][0] < 0) {
        for (auto& row : m) row[0] = -row[0];
        for (auto& row : out.V) row[0] = -row[0];
      }
      bool clean = true;
      for (size_t i = 1; i < m.size(); ++i) {
        if (m[i][0] != 0) {
          i64 q = m[i][0] / m[0][0];
          for (int j = 0; j < 2; ++j) m[i][static_cast<size_t>(j)] -= q * m[0][static_cast<size_t>(j)];
          if (m[i][0] != 0) clean = false;
        }
      }
      if (m[0][1] != 0) {
        i64 q = m[0][1] / m[0][0];
        col_op(1, 0, q);
        if (m[0][1] != 0) clean = false;
      }
      if (clean) break;
    }
    out.diag[0] = m[0][0];
    // Second invariant factor: gcd of the remaining column.
    i64 d2 = 0;
    for (size_t i = 1; i < m.size(); ++i) d2 = std::gcd(d2, m[i][1]);
    out.diag[1] = d2;
    if (out.diag[0] != 0 && d2 % out.diag[0] != 0) {
      // Restore divisibility d1 | d2 and rerun.
      col_op(0, 1, -1);
      continue;
    }
    return out;
  }
}

}  // namespace

std::pair<bool, ExactCertificate> strong_aperiodicity_exact(const MarkovChain& chain) {
  const int n = chain.size();
  std::vector<Edge> edges;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (chain.transition()(x, y) > 0.0) edges.push_back({x, y});
    }
  }
  TreePotentials tp = build_tree(chain, edges);

  ExactCertificate cert;
  std::vector<std::array<i64, 2>> rows;  // (W_C, -l_C)
  for (size_t ei = 0; ei < edges.size(); ++ei) {
    if (tp.tree_edge[ei]) continue;
    const Edge& e = edges[ei];
    i64 w = tp.A[static_cast<size_t>(e.from)] + chain.label(e.to) - tp.A[static_cast<size_t>(e.to)];
    i64 l = tp.B[static_cast<size_t>(e.from)] + 1 - tp.B[static_cast<size_t>(e.to)];
    cert.fundamental_cycles.push_back({w, l});
    if (w != 0 || l != 0) rows.push_back({w, -l});
  }

  SmithResult snf = smith_form(rows);
  cert.smith_diag = snf.diag;

  // Solution set in w-coordinates: d_i * w_i in Z (free direction when
  // d_i == 0). The t-projection is spanned by V[0][i]/d_i plus full lines
  // for free directions with V[0][i] != 0.
  bool free_line_u = false;
  int free_line_idx = -1;
  std::vector<std::pair<Rat, int>> gens;  // (u-component, column index)
  for (int i = 0; i < 2; ++i) {
    if (snf.diag[static_cast<size_t>(i)] == 0) {
      if (snf.V[0][static_cast<size_t>(i)] != 0) { free_line_u = true; free_line_idx = i; }
    } else {
      gens.push_back({Rat::make(snf.V[0][static_cast<size_t>(i)], snf.diag[static_cast<size_t>(i)]), i});
    }
  }

  auto make_phi = [&](const Rat& u, const Rat& v) {
    // omega(z) = v*B_z - u*A_z in units of 2pi; phi(z) = e^{2 pi i omega(z)}.
    std::vector<std::complex<double>> phi(static_cast<size_t>(n));
    for (int z = 0; z < n; ++z) {
      Rat w = v.scaled(tp.B[static_cast<size_t>(z)]) - u.scaled(tp.A[static_cast<size_t>(z)]);
      phi[static_cast<size_t>(z)] =
          std::polar(1.0, 2.0 * std::numbers::pi * w.frac().to_double());
    }
    return phi;
  };
  auto check_edges = [&](const Rat& u, const Rat& v) {
    // u*s_y - v - omega(x) + omega(y) must be an integer on every edge.
    for (const Edge& e : edges) {
      Rat wx = v.scaled(tp.B[static_cast<size_t>(e.from)]) - u.scaled(tp.A[static_cast<size_t>(e.from)]);
      Rat wy = v.scaled(tp.B[static_cast<size_t>(e.to)]) - u.scaled(tp.A[static_cast<size_t>(e.to)]);
      Rat lhs = u.scaled(chain.label(e.to)) - v - wx + wy;
      if (!lhs.is_integer()) return false;
    }
    return true;
  };
  auto fill_witness = [&](const Rat& u, const Rat& v) {
    Rat uf = u.frac(), vf = v.frac();
    cert.strongly_aperiodic = false;
    cert.t_num = uf.num;
    cert.t_den = uf.den;
    cert.theta_num = vf.num;
    cert.theta_den = vf.den;
    cert.lambda = std::polar(1.0, 2.0 * std::numbers::pi * vf.to_double());
    cert.phi = make_phi(uf, vf);
    if (!check_edges(uf, vf)) {
      raise(errc::eigen_failure, "exact aperiodicity witness failed the edge equations");
    }
    cert.summary = "nontrivial solution: t = 2*pi*" + std::to_string(cert.t_num) + "/" +
                   std::to_string(cert.t_den) + ", theta = 2*pi*" +
                   std::to_string(cert.theta_num) + "/" + std::to_string(cert.theta_den);
  };

  if (free_line_u) {
    // A whole line of solutions projects onto t: pick u = 1/2 on it.
    i64 a = snf.V[0][static_cast<size_t>(free_line_idx)];
    Rat u = Rat::make(1, 2);
    Rat v = Rat::from128(snf.V[1][static_cast<size_t>(free_line_idx)], 2 * a);
    cert.t_gen_num = 0;
    cert.t_gen_den = 0;  // full line
    fill_witness(u, v);
    return {false, cert};
  }

  // Rational gcd of the generator projections; the group always contains Z,
  // so the reduced generator is exactly 1/q.
  Rat gamma{1, 1};
  std::array<i64, 2> coeff{0, 0};
  if (gens.size() == 1) {
    gamma = gens[0].first;
    coeff[0] = 1;
    if (gamma.num < 0) { gamma.num = -gamma.num; coeff[0] = -1; }
    if (gamma.num == 0) { gamma = Rat{1, 1}; coeff[0] = 0; }  // only v constrained
  } else if (gens.size() == 2) {
    const Rat& f1 = gens[0].first;
    const Rat& f2 = gens[1].first;
    i64 p1 = f1.num * f2.den;
    i64 p2 = f2.num * f1.den;
    ExtGcd eg = ext_gcd(p1, p2);
    if (eg.g == 0) {
      gamma = Rat{1, 1};
    } else {
      gamma = Rat::from128(eg.g, static_cast<i128>(f1.den) * f2.den);
      // Coefficients transfer through the common-denominator scaling.
      coeff[0] = eg.x;
      coeff[1] = eg.y;
    }
  }
  cert.t_gen_num = gamma.num;
  cert.t_gen_den = gamma.den;

  if (gamma.den == 1) {
    cert.strongly_aperiodic = true;
    cert.summary = "only solutions have t in 2*pi*Z (Smith diagonal " +
                   std::to_string(snf.diag[0]) + ", " + std::to_string(snf.diag[1]) + ")";
    return {true, cert};
  }

  // Build the witness z = sum coeff_i * V e_i / d_i; its u-component is 1/q.
  Rat u{0, 1}, v{0, 1};
  for (size_t k = 0; k < gens.size(); ++k) {
    int col = gens[k].second;
    i64 d = snf.diag[static_cast<size_t>(col)];
    u = u + Rat::from128(static_cast<i128>(coeff[k]) * snf.V[0][static_cast<size_t>(col)], d);
    v = v + Rat::from128(static_cast<i128>(coeff[k]) * snf.V[1][static_cast<size_t>(col)], d);
  }
  fill_witness(u, v);
  return {false, cert};
}

}  // namespace mclt
