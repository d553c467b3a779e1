#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "stqp/conic.hpp"
#include "stqp/dnn.hpp"
#include "stqp/exact_solver.hpp"
#include "stqp/graph.hpp"
#include "stqp/transforms.hpp"

namespace stqp {

/// Edge (i,j) iff 2 Q_ij < Q_ii + Q_jj, compared exactly.
inline Graph convexity_graph(const SymMatrix& q) {
  Graph g(q.n());
  for (std::size_t i = 0; i < q.n(); ++i)
    for (std::size_t j = i + 1; j < q.n(); ++j)
      if (2.0 * q(i, j) < q(i, i) + q(j, j)) g.add_edge(i, j);
  return g;
}

struct CliqueEntry {
  IndexSet clique;
  double ell = 0.0;
  double nu = 0.0;
  SolverStatus status = SolverStatus::converged;
};

struct CliqueBounds {
  double ell_full = 0.0;
  double ell_min_clique = 0.0;
  double nu_min_clique = 0.0;
  double nu_full = 0.0;
  std::vector<CliqueEntry> cliques;
  bool first_tight = false;   // l(Q) = min l(Q_CC)
  bool second_tight = false;  // min l(Q_CC) = min nu(Q_CC)
  bool converged = true;
};

inline bool values_agree(double a, double b, double tol = 1e-5) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline CliqueBounds clique_bounds(const SymMatrix& q, const SolveOptions& sopt = {}, const ConicOptions& copt = {}) {
  CliqueBounds b;
  const auto full = ell(q, copt);
  b.ell_full = full.ell;
  b.converged = full.converged();
  b.nu_full = solve_stqp(q, sopt).nu;
  b.ell_min_clique = b.nu_min_clique = std::numeric_limits<double>::infinity();
  for (const auto& c : maximal_cliques(convexity_graph(q))) {
    const auto sub = principal_submatrix(q, c);
    CliqueEntry e;
    e.clique = c;
    const auto r = ell(sub, copt);
    e.ell = r.ell;
    e.status = r.solver_status;
    b.converged = b.converged && r.converged();
    e.nu = solve_stqp(sub, sopt).nu;
    b.ell_min_clique = std::min(b.ell_min_clique, e.ell);
    b.nu_min_clique = std::min(b.nu_min_clique, e.nu);
    b.cliques.push_back(std::move(e));
  }
  b.first_tight = values_agree(b.ell_full, b.ell_min_clique);
  b.second_tight = values_agree(b.ell_min_clique, b.nu_min_clique);
  return b;
}

enum class CompletionVerdict { exact, not_exact, inapplicable };

inline const char* to_string(CompletionVerdict v) {
  switch (v) {
    case CompletionVerdict::exact: return "exact";
    case CompletionVerdict::not_exact: return "not-exact";
    default: return "inapplicable";
  }
}

/// On an SPN-completable convexity graph the relaxation is exact iff the
/// clique relaxations already reach nu.
inline CompletionVerdict spn_completable_exactness(const SymMatrix& q, const SolveOptions& sopt = {},
                                                   const ConicOptions& copt = {}) {
  if (!is_spn_completable(convexity_graph(q)).completable) return CompletionVerdict::inapplicable;
  return clique_bounds(q, sopt, copt).second_tight ? CompletionVerdict::exact : CompletionVerdict::not_exact;
}

namespace detail {

inline void check_weights(const Graph& g, const Vector& w) {
  if (static_cast<std::size_t>(w.size()) != g.n()) throw DimensionError("theta: weight length mismatch");
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (!(w(k) > 0.0)) throw InvalidArgument("theta: weights must be positive");
}

/// max <W,X> s.t. tr X = 1, X_ij = 0 on edges of gbar, X psd, and
/// optionally X >= 0 on the remaining pairs.
inline double theta_program(const Graph& gbar, const Vector& w, bool nonneg, const ConicOptions& opt) {
  check_weights(gbar, w);
  const std::size_t n = gbar.n();
  if (n == 0) throw DimensionError("theta: empty graph");
  std::size_t free_pairs = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!gbar.has_edge(i, j)) ++free_pairs;
  ConicProgram prog(n, nonneg ? free_pairs : 0);
  prog.set_objective(SymMatrix::generate(n, [&](std::size_t i, std::size_t j) {
    return -std::sqrt(w(static_cast<Eigen::Index>(i)) * w(static_cast<Eigen::Index>(j)));
  }));
  LinearConstraint tr;
  for (std::size_t i = 0; i < n; ++i) tr.psd.push_back({i, i, 1.0});
  tr.rhs = 1.0;
  prog.add_constraint(std::move(tr));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      LinearConstraint c;
      c.psd.push_back({i, j, 0.5});
      if (!gbar.has_edge(i, j)) {
        if (!nonneg) continue;
        c.nonneg.emplace_back(k++, -1.0);
      }
      prog.add_constraint(std::move(c));
    }
  const auto sol = solve_conic(prog, opt);
  if (!sol.converged()) throw SolverError(std::string("theta: solver ") + to_string(sol.status));
  return -sol.dual_objective;
}

}  // namespace detail

/// Weighted Lovasz theta of the complement graph gbar.
inline double theta(const Graph& gbar, const Vector& w, const ConicOptions& opt = {}) {
  return detail::theta_program(gbar, w, false, opt);
}

/// Schrijver's strengthening: theta with X additionally nonnegative.
inline double theta_prime(const Graph& gbar, const Vector& w, const ConicOptions& opt = {}) {
  return detail::theta_program(gbar, w, true, opt);
}

/// Moves every positive X_ij on a non-edge of g onto the diagonal:
/// X += X_ij (e_i - e_j)(e_i - e_j)^T. Keeps X doubly nonnegative and <E,X>.
inline SymMatrix zero_nonedges(const SymMatrix& x, const Graph& g) {
  if (x.n() != g.n()) throw DimensionError("zero_nonedges: dimension mismatch");
  Dense d = x.dense();
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = i + 1; j < g.n(); ++j) {
      if (g.has_edge(i, j)) continue;
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      const double alpha = d(a, b);
      d(a, a) += alpha;
      d(b, b) += alpha;
      d(a, b) = d(b, a) = 0.0;
    }
  return SymMatrix::from_dense(d, 0.0);
}

}  // namespace stqp
