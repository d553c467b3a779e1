#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "stqp/affine_slice.hpp"
#include "stqp/conic.hpp"
#include "stqp/exact_solver.hpp"
#include "stqp/graph.hpp"
#include "stqp/simplex.hpp"
#include "stqp/sym_matrix.hpp"
#include "stqp/transforms.hpp"

namespace stqp {

struct RelaxResult {
  double ell = 0.0;
  SymMatrix primal_X;
  double dual_sigma = 0.0;
  SymMatrix dual_S;  // Q - sigma E
  SymMatrix P;       // PSD part of dual_S
  SymMatrix N;       // nonnegative part, zero diagonal
  SolverStatus solver_status = SolverStatus::numerical_failure;
  int iterations = 0;
  double primal_objective = 0.0;
  double relative_gap = 0.0;

  bool converged() const { return solver_status == SolverStatus::converged; }
};

namespace detail {

/// DNN program min <Q,X> s.t. <E,X> = 1, X psd, X_ij = z_ij >= 0 (i < j).
/// Diagonal entries are nonnegative already by semidefiniteness.
inline ConicProgram dnn_program(const SymMatrix& q) {
  const std::size_t n = q.n();
  ConicProgram prog(n, n * (n - 1) / 2);
  prog.set_objective(q);
  LinearConstraint unit;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) unit.psd.push_back({i, j, 1.0});
  unit.rhs = 1.0;
  prog.add_constraint(std::move(unit));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      LinearConstraint link;
      link.psd.push_back({i, j, 0.5});
      link.nonneg.emplace_back(k, -1.0);
      prog.add_constraint(std::move(link));
    }
  return prog;
}

}  // namespace detail

/// The DNN lower bound l(Q) with primal and dual certificates.
inline RelaxResult ell(const SymMatrix& q, const ConicOptions& opt = {}) {
  const auto prog = detail::dnn_program(q);
  const auto sol = solve_conic(prog, opt);
  RelaxResult r;
  r.solver_status = sol.status;
  r.iterations = sol.iterations;
  r.relative_gap = sol.relative_gap;
  r.primal_objective = sol.primal_objective;
  r.dual_sigma = sol.y(0);
  r.ell = r.dual_sigma;
  r.primal_X = SymMatrix::symmetrized(sol.X);
  r.dual_S = shift(q, -r.dual_sigma);
  r.P = SymMatrix::symmetrized(sol.S);
  r.N = r.dual_S - r.P;
  return r;
}

enum class SpnVerdict { member, non_member, borderline };

inline const char* to_string(SpnVerdict v) {
  switch (v) {
    case SpnVerdict::member: return "member";
    case SpnVerdict::non_member: return "non-member";
    default: return "borderline";
  }
}

inline constexpr double kSpnBand = 1e-7;

struct SpnCertificate {
  SymMatrix M;
  double margin = 0.0;
  SymMatrix P;
  SymMatrix N;  // M - P
  SpnVerdict verdict = SpnVerdict::borderline;
  std::string note;

  /// Membership up to the borderline band.
  bool is_member() const { return verdict == SpnVerdict::member || (verdict == SpnVerdict::borderline && margin >= -kSpnBand); }
};

inline SpnVerdict spn_verdict(double margin) {
  if (margin >= kSpnBand) return SpnVerdict::member;
  if (margin <= -kSpnBand) return SpnVerdict::non_member;
  return SpnVerdict::borderline;
}

/// The largest uniform margin d with M - dE - P >= 0 for some psd P equals
/// l(M), so a relaxation of M - lambda E doubles as the certificate.
inline SpnCertificate spn_from_relax(const SymMatrix& m, const RelaxResult& relax_of_m) {
  SpnCertificate c;
  c.M = m;
  c.margin = relax_of_m.ell;
  c.P = relax_of_m.P;
  c.N = m - c.P;
  if (!relax_of_m.converged()) {
    c.verdict = SpnVerdict::borderline;
    c.note = std::string("solver ") + to_string(relax_of_m.solver_status);
  } else {
    c.verdict = spn_verdict(c.margin);
  }
  return c;
}

inline SpnCertificate is_spn(const SymMatrix& m, const ConicOptions& opt = {}) {
  return spn_from_relax(m, ell(m, opt));
}

struct QxMembership {
  bool member = false;
  double lambda = 0.0;
  SpnCertificate certificate;  // of Q - lambda E; Q = P + N + lambda E
};

inline QxMembership in_Qx(const SymMatrix& q, const SimplexPoint& x, const ConicOptions& opt = {}) {
  QxMembership r;
  r.lambda = quadratic_form(q, x);
  r.certificate = is_spn(shift(q, -r.lambda), opt);
  r.member = r.certificate.is_member();
  return r;
}

enum class Exactness { exact, positive_gap, borderline };

inline const char* to_string(Exactness e) {
  switch (e) {
    case Exactness::exact: return "exact";
    case Exactness::positive_gap: return "positive-gap";
    default: return "borderline";
  }
}

struct ExactnessReport {
  SymMatrix Q;
  double ell = 0.0;
  double nu = 0.0;
  double gap = 0.0;
  Exactness verdict = Exactness::borderline;
  std::optional<SimplexPoint> witness_x;
  double lambda = 0.0;
  SymMatrix P;
  SymMatrix N;
  SpnCertificate gap_certificate;  // certificate of Q - nu E
  SolveResult exact;
  RelaxResult relax;
};

struct ClassifyOptions {
  SolveOptions solve;
  ConicOptions conic;
  double exact_tol = 1e-5;
};

/// Compares nu (exact solver) with l (DNN relaxation). The certificate of
/// Q - nu E comes from the same relaxation: l(Q - nu E) = l(Q) - nu.
inline ExactnessReport classify_exactness(const SymMatrix& q, const ClassifyOptions& opt = {}) {
  ExactnessReport rep;
  rep.Q = q;
  rep.exact = solve_stqp(q, opt.solve);
  rep.nu = rep.exact.nu;
  rep.relax = ell(q, opt.conic);
  rep.ell = rep.relax.ell;
  rep.gap = rep.nu - rep.ell;
  rep.lambda = rep.nu;

  RelaxResult shifted = rep.relax;
  shifted.ell = rep.relax.ell - rep.nu;
  rep.gap_certificate = spn_from_relax(shift(q, -rep.nu), shifted);
  rep.P = rep.gap_certificate.P;
  rep.N = rep.gap_certificate.N;

  if (!rep.relax.converged()) {
    rep.verdict = Exactness::borderline;
  } else if (std::abs(rep.gap) <= opt.exact_tol * std::max(1.0, std::abs(rep.nu))) {
    rep.verdict = Exactness::exact;
    rep.witness_x = rep.exact.minimizers.front();
  } else if (rep.gap_certificate.verdict == SpnVerdict::non_member) {
    rep.verdict = Exactness::positive_gap;
  } else {
    rep.verdict = Exactness::borderline;
  }
  return rep;
}

struct WitnessOptions {
  double zero_tol = 1e-6;     // N_ij counted as zero below this (scaled by max(1, |Q|))
  double null_tol = 1e-6;     // eigenvalues of P below this (relative) span its null space
  double value_tol = 1e-6;    // accepted |x^T Q x - l|
  double residual_tol = 1e-4; // the split is only as accurate as the solver's complementarity
};

/// Looks for x in the simplex with P x = 0 and x^T N x = 0 for the dual split
/// of a converged relaxation; such x attains l(Q) and proves exactness.
inline std::optional<SimplexPoint> search_exact_witness(const SymMatrix& q, const RelaxResult& relax,
                                                        const WitnessOptions& opt = {}) {
  if (!relax.converged()) return std::nullopt;
  const std::size_t n = q.n();
  const double scale = std::max(1.0, q.max_abs());
  Dense p = relax.P.dense();
  Dense nm = relax.N.dense();
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
    p(j, j) += nm(j, j);
    nm(j, j) = 0.0;
  }
  Graph zg(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (nm(i, j) <= opt.zero_tol * scale) zg.add_edge(i, j);

  Eigen::SelfAdjointEigenSolver<Dense> es(p);
  const double pmax = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> range;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) > opt.null_tol * pmax) range.push_back(k);

  for (const auto& clique : maximal_cliques(zg)) {
    const auto m = static_cast<Eigen::Index>(clique.size());
    const auto r = static_cast<Eigen::Index>(range.size());
    Dense a(r + 1, m);
    Vector b = Vector::Zero(r + 1);
    for (Eigen::Index t = 0; t < r; ++t)
      for (Eigen::Index c = 0; c < m; ++c)
        a(t, c) = es.eigenvectors()(static_cast<Eigen::Index>(clique[c]), range[t]);
    a.row(r).setOnes();
    b(r) = 1.0;
    const auto sol = detail::solve_affine(a, b, 1e-9, opt.residual_tol);
    if (!sol.consistent) continue;
    std::optional<detail::MaxMinPoint> best;
    try {
      best = detail::max_min_point(sol.particular, sol.null_basis);
    } catch (const CapExceeded&) {
      continue;
    }
    if (!best || best->min_coord < -opt.residual_tol) continue;
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
    for (Eigen::Index c = 0; c < m; ++c) x(static_cast<Eigen::Index>(clique[c])) = std::max(0.0, best->x(c));
    auto pt = SimplexPoint::project(x);
    if (std::abs(quadratic_form(q, pt) - relax.ell) <= opt.value_tol * scale) return pt;
  }
  return std::nullopt;
}

/// Exactness from the support size of an optimal x alone: |A(x)| >= n - 1,
/// or n = 5 with x a vertex. Throws when x is not optimal.
inline std::optional<Exactness> special_support_exactness(const SymMatrix& q, const SimplexPoint& x,
                                                          const SolveOptions& opt = {}, double tol = 1e-9) {
  if (q.n() != x.n()) throw DimensionError("special_support_exactness: dimension mismatch");
  const double v = quadratic_form(q, x);
  if (!is_copositive(shift(q, -v), tol * std::max(1.0, std::abs(v)), opt))
    throw InvalidArgument("special_support_exactness: x is not a global minimizer");
  const std::size_t a = x.support().size();
  if (a + 1 >= q.n() || (q.n() == 5 && a == 1)) return Exactness::exact;
  return std::nullopt;
}

}  // namespace stqp
