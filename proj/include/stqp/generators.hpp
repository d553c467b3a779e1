#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>

#include "stqp/exact_solver.hpp"
#include "stqp/graph.hpp"
#include "stqp/simplex.hpp"
#include "stqp/sym_matrix.hpp"
#include "stqp/transforms.hpp"

namespace stqp {

enum class RecipeKind { exact, gap, mgw };

inline const char* to_string(RecipeKind k) {
  switch (k) {
    case RecipeKind::exact: return "exact";
    case RecipeKind::gap: return "gap";
    default: return "Mgw";
  }
}

/// Q = P + N + lambda E with P = (I - e x^T) K (I - x e^T).
struct ExactRecipe {
  SimplexPoint x;
  SymMatrix K;          // psd seed
  SymMatrix N_pattern;  // nonnegative, zero on A(x) x A(x)
  double lambda = 0.0;
};

/// Q = lambda E + J D Mhat D J^T with Mhat = [[B, C], [C^T, H]].
struct GapRecipe {
  std::size_t n = 5;
  SymMatrix B;  // order n - 5, copositive (ignored when n = 5)
  Dense C;      // (n - 5) x 5, nonnegative
  Permutation perm;
  Vector d;     // positive scaling
  double lambda = 0.0;
};

struct MgwRecipe {
  Graph G;
  Vector w;
  SymMatrix slacks;  // nonnegative increments on non-edges; zero matrix by default
};

inline SymMatrix horn_matrix() {
  return SymMatrix::from_rows({{1, -1, 1, 1, -1},
                               {-1, 1, -1, 1, 1},
                               {1, -1, 1, -1, 1},
                               {1, 1, -1, 1, -1},
                               {-1, 1, 1, -1, 1}});
}

inline SymMatrix gen_exact(const ExactRecipe& r) {
  const std::size_t n = r.x.n();
  if (r.K.n() != n || r.N_pattern.n() != n) throw DimensionError("gen_exact: recipe dimension mismatch");
  if (r.K.min_eigenvalue() < -1e-10 * std::max(1.0, r.K.max_abs()))
    throw InvalidArgument("gen_exact: K is not positive semidefinite");
  const auto a = r.x.support();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      if (r.N_pattern(i, j) < 0.0) throw InvalidArgument("gen_exact: N_pattern has a negative entry");
      const bool in_a = std::binary_search(a.begin(), a.end(), i) && std::binary_search(a.begin(), a.end(), j);
      if (in_a && r.N_pattern(i, j) != 0.0)
        throw InvalidArgument("gen_exact: N_pattern must vanish on the support block");
    }
  const auto nn = static_cast<Eigen::Index>(n);
  const Dense t = Dense::Identity(nn, nn) - Vector::Ones(nn) * r.x.x().transpose();
  const auto p = SymMatrix::symmetrized(t * r.K.dense() * t.transpose());
  return shift(p + r.N_pattern, r.lambda);
}

inline SymMatrix gen_gap(const GapRecipe& r, const SolveOptions& opt = {}) {
  const std::size_t n = r.n;
  if (n < 5) throw DimensionError("gen_gap: n must be at least 5");
  const std::size_t m = n - 5;
  check_permutation(r.perm, n);
  if (static_cast<std::size_t>(r.d.size()) != n) throw DimensionError("gen_gap: scaling length mismatch");
  const auto nn = static_cast<Eigen::Index>(n), mm = static_cast<Eigen::Index>(m);
  Dense hat = Dense::Zero(nn, nn);
  if (m > 0) {
    if (r.B.n() != m) throw DimensionError("gen_gap: B must have order n - 5");
    if (r.C.rows() != mm || r.C.cols() != 5) throw DimensionError("gen_gap: C must be (n - 5) x 5");
    if (r.C.size() > 0 && r.C.minCoeff() < 0.0) throw InvalidArgument("gen_gap: C has a negative entry");
    if (!is_copositive(r.B, 1e-12, opt)) throw InvalidArgument("gen_gap: B is not copositive");
    hat.topLeftCorner(mm, mm) = r.B.dense();
    hat.topRightCorner(mm, 5) = r.C;
    hat.bottomLeftCorner(5, mm) = r.C.transpose();
  }
  hat.bottomRightCorner(5, 5) = horn_matrix().dense();
  const auto scaled = diag_scale(SymMatrix::from_dense(hat, 0.0), r.d);
  return shift(permute(scaled, r.perm), r.lambda);
}

inline SymMatrix gen_Mgw(const Graph& g, const Vector& w, const SymMatrix& slacks) {
  const std::size_t n = g.n();
  if (static_cast<std::size_t>(w.size()) != n) throw DimensionError("gen_Mgw: weight length mismatch");
  if (slacks.n() != n) throw DimensionError("gen_Mgw: slack dimension mismatch");
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (!(w(k) > 0.0)) throw InvalidArgument("gen_Mgw: weights must be positive");
  return SymMatrix::generate(n, [&](std::size_t i, std::size_t j) {
    const double di = 1.0 / w(static_cast<Eigen::Index>(i));
    if (i == j) return di;
    if (g.has_edge(i, j)) return 0.0;
    const double s = slacks(i, j);
    if (s < 0.0) throw InvalidArgument("gen_Mgw: slacks must be nonnegative");
    return 0.5 * (di + 1.0 / w(static_cast<Eigen::Index>(j))) + s;
  });
}

inline SymMatrix gen_Mgw(const Graph& g, const Vector& w) { return gen_Mgw(g, w, SymMatrix(g.n())); }

inline SymMatrix gen_Mgw(const MgwRecipe& r) { return gen_Mgw(r.G, r.w, r.slacks); }

// Random recipe helpers. All draws come from the caller's engine so a fixed
// seed reproduces the instance stream.

inline SymMatrix random_psd(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  const auto nn = static_cast<Eigen::Index>(n);
  Dense a(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i)
    for (Eigen::Index j = 0; j < nn; ++j) a(i, j) = g(rng);
  return SymMatrix::symmetrized(a.transpose() * a);
}

inline SimplexPoint random_simplex_point(std::mt19937_64& rng, std::size_t n, std::size_t support_size) {
  if (support_size == 0 || support_size > n) throw InvalidArgument("random_simplex_point: bad support size");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < support_size; ++k) x(static_cast<Eigen::Index>(idx[k])) = u(rng);
  return SimplexPoint::project(x);
}

inline ExactRecipe random_exact_recipe(std::mt19937_64& rng, std::size_t n, double density = 0.6,
                                       std::size_t support_size = 0) {
  std::uniform_int_distribution<std::size_t> us(1, n);
  ExactRecipe r;
  r.x = random_simplex_point(rng, n, support_size ? support_size : us(rng));
  r.K = random_psd(rng, n);
  const auto a = r.x.support();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  r.N_pattern = SymMatrix::generate(n, [&](std::size_t i, std::size_t j) {
    const bool in_a = std::binary_search(a.begin(), a.end(), i) && std::binary_search(a.begin(), a.end(), j);
    if (in_a) return 0.0;
    return u01(rng) < density ? u01(rng) : 0.0;
  });
  std::uniform_real_distribution<double> ul(-2.0, 2.0);
  r.lambda = ul(rng);
  return r;
}

inline GapRecipe random_gap_recipe(std::mt19937_64& rng, std::size_t n) {
  if (n < 5) throw DimensionError("random_gap_recipe: n must be at least 5");
  GapRecipe r;
  r.n = n;
  const std::size_t m = n - 5;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (m > 0) {
    // PSD plus nonnegative is copositive.
    r.B = random_psd(rng, m) + SymMatrix::generate(m, [&](std::size_t, std::size_t) { return u01(rng); });
    r.C = Dense(static_cast<Eigen::Index>(m), 5);
    for (auto& v : r.C.reshaped()) v = u01(rng);
  }
  r.perm.resize(n);
  std::iota(r.perm.begin(), r.perm.end(), 0);
  std::shuffle(r.perm.begin(), r.perm.end(), rng);
  std::uniform_real_distribution<double> ud(0.5, 2.0);
  r.d.resize(static_cast<Eigen::Index>(n));
  for (auto& v : r.d) v = ud(rng);
  std::uniform_real_distribution<double> ul(-2.0, 2.0);
  r.lambda = ul(rng);
  return r;
}

inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (u(rng) < p) g.add_edge(i, j);
  return g;
}

/// Chordal graph: each new vertex joins a clique of earlier vertices, so the
/// reverse insertion order is a perfect elimination ordering.
inline Graph random_chordal_graph(std::mt19937_64& rng, std::size_t n, double p = 0.6) {
  Graph g(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t v = 1; v < n; ++v) {
    if (u(rng) < 0.1) continue;  // occasionally start a new component
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    std::uint64_t clique = Graph::bit(pick(rng));
    for (std::size_t c = 0; c < v; ++c) {
      if (clique & Graph::bit(c)) continue;
      if ((g.neighbors(c) & clique) == clique && u(rng) < p) clique |= Graph::bit(c);
    }
    for (std::uint64_t m = clique; m; m &= m - 1) g.add_edge(v, static_cast<std::size_t>(std::countr_zero(m)));
  }
  return g;
}

inline Vector random_weights(std::mt19937_64& rng, std::size_t n, double lo = 0.5, double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector w(static_cast<Eigen::Index>(n));
  for (auto& v : w) v = u(rng);
  return w;
}

}  // namespace stqp
