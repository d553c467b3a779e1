#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "stqp/errors.hpp"
#include "stqp/sym_matrix.hpp"

namespace stqp {

// Dense primal-dual interior-point solver for
//
//   min  <C, X> + c^T z   s.t.  <A_i, X> + a_i^T z = b_i,  X psd,  z >= 0
//   max  b^T y            s.t.  C - sum y_i A_i = S psd,  c - sum y_i a_i = s >= 0
//
// using Nesterov-Todd scaling on the PSD block and Mehrotra's
// predictor-corrector. Intended for the small programs of this library.

/// One entry (i <= j) of a sparse symmetric matrix; it stands for both
/// (i,j) and (j,i).
struct SymEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double v = 0.0;
};

struct LinearConstraint {
  std::vector<SymEntry> psd;                             // A_i
  std::vector<std::pair<std::size_t, double>> nonneg;    // a_i
  double rhs = 0.0;                                      // b_i
};

class ConicProgram {
 public:
  ConicProgram(std::size_t psd_dim, std::size_t nonneg_dim)
      : psd_dim_(psd_dim), nonneg_dim_(nonneg_dim), c_(Vector::Zero(static_cast<Eigen::Index>(nonneg_dim))) {
    if (psd_dim == 0) throw InvalidArgument("conic program: PSD block must be nonempty");
    objective_ = SymMatrix(psd_dim);
  }

  void set_objective(SymMatrix c_psd, Vector c_nonneg = {}) {
    if (c_psd.n() != psd_dim_) throw DimensionError("conic program: objective dimension mismatch");
    objective_ = std::move(c_psd);
    if (c_nonneg.size() != 0) {
      if (static_cast<std::size_t>(c_nonneg.size()) != nonneg_dim_)
        throw DimensionError("conic program: objective vector length mismatch");
      c_ = std::move(c_nonneg);
    }
  }

  void add_constraint(LinearConstraint con) {
    for (auto& e : con.psd) {
      if (e.i > e.j) std::swap(e.i, e.j);
      if (e.j >= psd_dim_) throw DimensionError("conic program: constraint index out of range");
      if (!std::isfinite(e.v)) throw InvalidArgument("conic program: non-finite coefficient");
    }
    for (const auto& [k, v] : con.nonneg) {
      if (k >= nonneg_dim_) throw DimensionError("conic program: orthant index out of range");
      if (!std::isfinite(v)) throw InvalidArgument("conic program: non-finite coefficient");
    }
    constraints_.push_back(std::move(con));
  }

  /// Dense form <A, X> + a^T z = b.
  void add_constraint(const SymMatrix& a, const Vector& a_nonneg, double b) {
    if (a.n() != psd_dim_) throw DimensionError("conic program: constraint dimension mismatch");
    LinearConstraint con;
    for (std::size_t i = 0; i < psd_dim_; ++i)
      for (std::size_t j = i; j < psd_dim_; ++j)
        if (a(i, j) != 0.0) con.psd.push_back({i, j, a(i, j)});
    if (a_nonneg.size() != 0) {
      if (static_cast<std::size_t>(a_nonneg.size()) != nonneg_dim_)
        throw DimensionError("conic program: constraint vector length mismatch");
      for (Eigen::Index k = 0; k < a_nonneg.size(); ++k)
        if (a_nonneg(k) != 0.0) con.nonneg.emplace_back(static_cast<std::size_t>(k), a_nonneg(k));
    }
    con.rhs = b;
    add_constraint(std::move(con));
  }

  std::size_t psd_dim() const { return psd_dim_; }
  std::size_t nonneg_dim() const { return nonneg_dim_; }
  const SymMatrix& objective() const { return objective_; }
  const Vector& objective_nonneg() const { return c_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

  /// Constraint i as a dense symmetric matrix.
  SymMatrix constraint_matrix(std::size_t i) const {
    Dense a = Dense::Zero(static_cast<Eigen::Index>(psd_dim_), static_cast<Eigen::Index>(psd_dim_));
    for (const auto& e : constraints_.at(i).psd) {
      a(e.i, e.j) += e.v;
      if (e.i != e.j) a(e.j, e.i) += e.v;
    }
    return SymMatrix::from_dense(a, 0.0);
  }

 private:
  std::size_t psd_dim_;
  std::size_t nonneg_dim_;
  SymMatrix objective_;
  Vector c_;
  std::vector<LinearConstraint> constraints_;
};

enum class SolverStatus { converged, max_iter, numerical_failure };

inline const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::max_iter: return "max-iter";
    default: return "numerical-failure";
  }
}

struct ConicOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  double step_fraction = 0.98;
  double presolve_tol = 1e-10;
  std::size_t max_psd_dim = 50;
  std::ostream* trace = nullptr;  // one line per iteration when set
};

struct ConicSolution {
  Dense X;
  Vector z;
  Vector y;   // multipliers of the constraints kept by presolve, mapped back (dropped rows get 0)
  Dense S;
  Vector s;
  SolverStatus status = SolverStatus::numerical_failure;
  int iterations = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;  // relative
  double dual_infeasibility = 0.0;    // relative
  double relative_gap = 0.0;
  std::size_t dropped_rows = 0;

  bool converged() const { return status == SolverStatus::converged; }
};

namespace detail {

struct ConicWork {
  std::size_t n = 0, p = 0, m = 0;
  Dense C;
  Vector c;
  Vector b;
  std::vector<LinearConstraint> rows;
  std::vector<bool> dense_row;

  double apply(std::size_t k, const Dense& X, const Vector& z) const {
    double v = 0.0;
    for (const auto& e : rows[k].psd) v += (e.i == e.j ? 1.0 : 2.0) * e.v * X(e.i, e.j);
    for (const auto& [idx, a] : rows[k].nonneg) v += a * z(static_cast<Eigen::Index>(idx));
    return v;
  }
  Vector apply_all(const Dense& X, const Vector& z) const {
    Vector r(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) r(static_cast<Eigen::Index>(k)) = apply(k, X, z);
    return r;
  }
  /// sum y_k A_k and sum y_k a_k.
  void adjoint(const Vector& y, Dense& out_psd, Vector& out_nonneg) const {
    out_psd.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    out_nonneg.setZero(static_cast<Eigen::Index>(p));
    for (std::size_t k = 0; k < m; ++k) {
      const double yk = y(static_cast<Eigen::Index>(k));
      if (yk == 0.0) continue;
      for (const auto& e : rows[k].psd) {
        out_psd(e.i, e.j) += yk * e.v;
        if (e.i != e.j) out_psd(e.j, e.i) += yk * e.v;
      }
      for (const auto& [idx, a] : rows[k].nonneg) out_nonneg(static_cast<Eigen::Index>(idx)) += yk * a;
    }
  }
  Dense dense_matrix(std::size_t k) const {
    Dense a = Dense::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& e : rows[k].psd) {
      a(e.i, e.j) += e.v;
      if (e.i != e.j) a(e.j, e.i) += e.v;
    }
    return a;
  }
};

/// Largest alpha with M + alpha dM psd (infinity when unbounded).
inline double max_psd_step(const Eigen::LLT<Dense>& chol, const Dense& dm) {
  const Dense li = chol.matrixL().solve(Dense::Identity(dm.rows(), dm.cols()));
  Dense t = li * dm * li.transpose();
  t = 0.5 * (t + t.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Dense> es(t, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

inline double max_orthant_step(const Vector& v, const Vector& dv) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (dv(k) < 0.0) a = std::min(a, -v(k) / dv(k));
  return a;
}

/// Drops linearly dependent rows (column-pivoted QR of the stacked svec rows).
/// Throws when a dropped row is inconsistent with the kept ones.
inline std::vector<std::size_t> independent_rows(const ConicProgram& prog, double tol) {
  const std::size_t n = prog.psd_dim(), p = prog.nonneg_dim();
  const std::size_t m = prog.constraints().size();
  const std::size_t dim = n * (n + 1) / 2 + p;
  Dense r = Dense::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(dim));
  Vector b(static_cast<Eigen::Index>(m));
  auto svec_index = [n](std::size_t i, std::size_t j) { return i * n - i * (i - 1) / 2 + (j - i); };
  for (std::size_t k = 0; k < m; ++k) {
    const auto& con = prog.constraints()[k];
    for (const auto& e : con.psd)
      r(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(svec_index(e.i, e.j))) +=
          (e.i == e.j ? 1.0 : std::sqrt(2.0)) * e.v;
    for (const auto& [idx, a] : con.nonneg)
      r(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n * (n + 1) / 2 + idx)) += a;
    b(static_cast<Eigen::Index>(k)) = con.rhs;
  }
  for (std::size_t k = 0; k < m; ++k) {
    const double nk = r.row(static_cast<Eigen::Index>(k)).norm();
    if (nk == 0.0 && prog.constraints()[k].rhs != 0.0)
      throw InvalidArgument("conic program: empty constraint with nonzero right-hand side");
  }
  // Normalized rows so the threshold is relative to each row's scale.
  Dense rn = r;
  for (Eigen::Index k = 0; k < rn.rows(); ++k) {
    const double nk = rn.row(k).norm();
    if (nk > 0.0) rn.row(k) /= nk;
  }
  Eigen::ColPivHouseholderQR<Dense> qr(rn.transpose());
  qr.setThreshold(tol);
  const auto rank = qr.rank();
  std::vector<std::size_t> kept;
  for (Eigen::Index t = 0; t < rank; ++t) kept.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(t)));
  std::sort(kept.begin(), kept.end());
  if (kept.size() == m) return kept;

  Dense rk(static_cast<Eigen::Index>(kept.size()), r.cols());
  Vector bk(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t t = 0; t < kept.size(); ++t) {
    rk.row(static_cast<Eigen::Index>(t)) = r.row(static_cast<Eigen::Index>(kept[t]));
    bk(static_cast<Eigen::Index>(t)) = b(static_cast<Eigen::Index>(kept[t]));
  }
  const Eigen::CompleteOrthogonalDecomposition<Dense> fit(rk.transpose());
  for (std::size_t k = 0, t = 0; k < m; ++k) {
    if (t < kept.size() && kept[t] == k) {
      ++t;
      continue;
    }
    const Vector coef = fit.solve(r.row(static_cast<Eigen::Index>(k)).transpose());
    const double pred = coef.dot(bk);
    const double bv = b(static_cast<Eigen::Index>(k));
    if (std::abs(pred - bv) > 1e-8 * std::max({1.0, std::abs(bv), std::abs(pred)}))
      throw InvalidArgument("conic program: inconsistent dependent constraint " + std::to_string(k));
  }
  return kept;
}

}  // namespace detail

inline ConicSolution solve_conic(const ConicProgram& prog, const ConicOptions& opt = {}) {
  using detail::ConicWork;
  if (prog.psd_dim() > opt.max_psd_dim)
    throw CapExceeded("conic solver: PSD dimension " + std::to_string(prog.psd_dim()) + " exceeds cap");
  if (prog.constraints().empty()) throw InvalidArgument("conic program: no constraints");

  const auto kept = detail::independent_rows(prog, opt.presolve_tol);
  if (opt.trace && kept.size() < prog.constraints().size())
    *opt.trace << "warning: presolve dropped " << prog.constraints().size() - kept.size() << " dependent row(s)\n";
  ConicWork w;
  w.n = prog.psd_dim();
  w.p = prog.nonneg_dim();
  w.m = kept.size();
  w.C = prog.objective().dense();
  w.c = prog.objective_nonneg();
  w.b.resize(static_cast<Eigen::Index>(w.m));
  for (std::size_t k = 0; k < w.m; ++k) {
    w.rows.push_back(prog.constraints()[kept[k]]);
    w.b(static_cast<Eigen::Index>(k)) = w.rows.back().rhs;
    w.dense_row.push_back(w.rows.back().psd.size() > w.n);
  }

  const auto n = static_cast<Eigen::Index>(w.n);
  const auto p = static_cast<Eigen::Index>(w.p);
  const auto m = static_cast<Eigen::Index>(w.m);
  const double nb = w.b.size() ? w.b.lpNorm<Eigen::Infinity>() : 0.0;
  const double norm_c = std::sqrt(w.C.squaredNorm() + w.c.squaredNorm());

  const double tau = 1.0 + nb;
  double eta = 1.0 + norm_c;
  for (std::size_t k = 0; k < w.m; ++k) {
    double na = 0.0;
    for (const auto& e : w.rows[k].psd) na += (e.i == e.j ? 1.0 : 2.0) * e.v * e.v;
    for (const auto& [idx, a] : w.rows[k].nonneg) na += a * a;
    eta = std::max(eta, 1.0 + std::sqrt(na));
  }
  Dense X = tau * Dense::Identity(n, n);
  Vector z = Vector::Constant(p, tau);
  Vector y = Vector::Zero(m);
  Dense S = eta * Dense::Identity(n, n);
  Vector s = Vector::Constant(p, eta);

  const double cone_dim = double(w.n + w.p);
  ConicSolution best;
  double best_merit = std::numeric_limits<double>::infinity();
  ConicSolution sol;
  sol.dropped_rows = prog.constraints().size() - w.m;

  auto record = [&](int it, double pinf, double dinf, double gap, double pobj, double dobj) {
    const double merit = std::max({pinf, dinf, gap});
    if (merit < best_merit) {
      best_merit = merit;
      best.X = X;
      best.z = z;
      best.y = y;
      best.S = S;
      best.s = s;
      best.iterations = it;
      best.primal_objective = pobj;
      best.dual_objective = dobj;
      best.primal_infeasibility = pinf;
      best.dual_infeasibility = dinf;
      best.relative_gap = gap;
    }
  };

  SolverStatus status = SolverStatus::max_iter;
  Dense aty;
  Vector aty_l;
  int it = 0;
  for (; it <= opt.max_iter; ++it) {
    w.adjoint(y, aty, aty_l);
    const Vector rp = w.b - w.apply_all(X, z);
    const Dense Rd = w.C - aty - S;
    const Vector rd = w.c - aty_l - s;
    const double pobj = (w.C.cwiseProduct(X)).sum() + w.c.dot(z);
    const double dobj = w.b.dot(y);
    const double pinf = rp.norm() / (1.0 + nb);
    const double dinf = std::sqrt(Rd.squaredNorm() + rd.squaredNorm()) / (1.0 + norm_c);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double mu = ((X.cwiseProduct(S)).sum() + z.dot(s)) / cone_dim;
    record(it, pinf, dinf, gap, pobj, dobj);
    if (opt.trace)
      *opt.trace << "iter " << it << " pobj " << pobj << " dobj " << dobj << " pinf " << pinf
                 << " dinf " << dinf << " gap " << gap << " mu " << mu << '\n';
    if (pinf <= opt.feas_tol && dinf <= opt.feas_tol && gap <= opt.gap_tol) {
      status = SolverStatus::converged;
      break;
    }
    if (it == opt.max_iter) break;

    // Nesterov-Todd scaling: G with G^{-1} X G^{-T} = G^T S G = diag(lambda).
    Eigen::LLT<Dense> cx(X), cs(S);
    if (cx.info() != Eigen::Success || cs.info() != Eigen::Success) {
      status = SolverStatus::numerical_failure;
      break;
    }
    const Dense lx = cx.matrixL();
    const Dense ls = cs.matrixL();
    Eigen::JacobiSVD<Dense> svd(ls.transpose() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector lam = svd.singularValues();
    if (lam.minCoeff() <= 0.0) {
      status = SolverStatus::numerical_failure;
      break;
    }
    const Dense G = lx * svd.matrixV() * lam.cwiseSqrt().cwiseInverse().asDiagonal();
    const Dense W = G * G.transpose();
    // G^{-1} = diag(sqrt(lam)) V^T L^{-1}
    const Dense lxinv = lx.triangularView<Eigen::Lower>().solve(Dense::Identity(n, n));
    const Dense Gi = lam.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() * lxinv;

    // Schur complement.
    std::vector<Dense> wAw(w.m);
    for (std::size_t k = 0; k < w.m; ++k) {
      if (w.dense_row[k]) {
        const Dense a = w.dense_matrix(k);
        wAw[k] = W * a * W;
      } else {
        Dense t = Dense::Zero(n, n);
        for (const auto& e : w.rows[k].psd) {
          const auto i = static_cast<Eigen::Index>(e.i), j = static_cast<Eigen::Index>(e.j);
          if (i == j) {
            t.noalias() += e.v * W.col(i) * W.row(i);
          } else {
            t.noalias() += e.v * (W.col(i) * W.row(j) + W.col(j) * W.row(i));
          }
        }
        wAw[k] = std::move(t);
      }
    }
    const Vector dz_ratio = z.cwiseQuotient(s);
    Dense M(m, m);
    for (std::size_t k = 0; k < w.m; ++k)
      for (std::size_t l = 0; l <= k; ++l) {
        double v = 0.0;
        for (const auto& e : w.rows[l].psd) v += (e.i == e.j ? 1.0 : 2.0) * e.v * wAw[k](e.i, e.j);
        const auto& ak = w.rows[k].nonneg;
        const auto& al = w.rows[l].nonneg;
        for (const auto& [ik, vk] : ak)
          for (const auto& [il, vl] : al)
            if (ik == il) v += vk * vl * dz_ratio(static_cast<Eigen::Index>(ik));
        M(k, l) = M(l, k) = v;
      }
    Eigen::LLT<Dense> cm(M);
    if (cm.info() != Eigen::Success) {
      status = SolverStatus::numerical_failure;
      break;
    }

    const Dense WRdW = W * Rd * W;
    // Solves for (dX, dz, dy, dS, ds) given the complementarity targets.
    auto direction = [&](const Dense& rc, const Vector& rcl, Dense& dX, Vector& dz, Vector& dy,
                         Dense& dS, Vector& ds) {
      Vector rhs = rp - w.apply_all(rc - WRdW, rcl.cwiseQuotient(s) - dz_ratio.cwiseProduct(rd));
      dy = cm.solve(rhs);
      Dense atdy;
      Vector atdy_l;
      w.adjoint(dy, atdy, atdy_l);
      dS = Rd - atdy;
      ds = rd - atdy_l;
      dX = rc - W * dS * W;
      dX = 0.5 * (dX + dX.transpose()).eval();
      dz = (rcl - z.cwiseProduct(ds)).cwiseQuotient(s);
    };

    auto steps = [&](const Dense& dX, const Vector& dz, const Dense& dS, const Vector& ds) {
      double ap = std::min(detail::max_psd_step(cx, dX), detail::max_orthant_step(z, dz));
      double ad = std::min(detail::max_psd_step(cs, dS), detail::max_orthant_step(s, ds));
      return std::pair{std::min(1.0, opt.step_fraction * ap), std::min(1.0, opt.step_fraction * ad)};
    };

    // Inverse of the Lyapunov operator Y -> (Lambda Y + Y Lambda)/2.
    auto lyap_inv = [&](const Dense& r) {
      Dense out(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = 2.0 * r(i, j) / (lam(i) + lam(j));
      return out;
    };

    // Predictor.
    Dense dXa, dSa;
    Vector dza, dya, dsa;
    direction(-X, -z.cwiseProduct(s), dXa, dza, dya, dSa, dsa);
    auto [apa, ada] = steps(dXa, dza, dSa, dsa);
    const double mu_aff = (((X + apa * dXa).cwiseProduct(S + ada * dSa)).sum() +
                           (z + apa * dza).dot(s + ada * dsa)) /
                          cone_dim;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector with the second-order term in scaled space.
    const Dense dXt = Gi * dXa * Gi.transpose();
    const Dense dSt = G.transpose() * dSa * G;
    const Dense corr = 0.5 * (dXt * dSt + dSt * dXt);
    Dense target = -corr;
    for (Eigen::Index i = 0; i < n; ++i) target(i, i) += sigma * mu - lam(i) * lam(i);
    const Dense rc = G * lyap_inv(target) * G.transpose();
    const Vector rcl = Vector::Constant(p, sigma * mu) - z.cwiseProduct(s) - dza.cwiseProduct(dsa);
    Dense dX, dS;
    Vector dzv, dy, ds;
    direction(0.5 * (rc + rc.transpose()), rcl, dX, dzv, dy, dS, ds);
    auto [ap, ad] = steps(dX, dzv, dS, ds);
    if (opt.trace) *opt.trace << "  sigma " << sigma << " alpha_p " << ap << " alpha_d " << ad << '\n';
    if (ap < 1e-12 && ad < 1e-12) {
      status = SolverStatus::numerical_failure;
      break;
    }
    X += ap * dX;
    X = 0.5 * (X + X.transpose()).eval();
    z += ap * dzv;
    y += ad * dy;
    S += ad * dS;
    S = 0.5 * (S + S.transpose()).eval();
    s += ad * ds;
  }

  if (status == SolverStatus::converged) {
    sol.X = X;
    sol.z = z;
    sol.y = y;
    sol.S = S;
    sol.s = s;
    sol.iterations = it;
    sol.primal_objective = best.primal_objective;
    sol.dual_objective = best.dual_objective;
    sol.primal_infeasibility = best.primal_infeasibility;
    sol.dual_infeasibility = best.dual_infeasibility;
    sol.relative_gap = best.relative_gap;
    // The last recorded iterate is the converged one only if it was the best;
    // recompute from the final state to be exact.
    Dense a_y;
    Vector a_yl;
    w.adjoint(y, a_y, a_yl);
    sol.primal_objective = (w.C.cwiseProduct(X)).sum() + w.c.dot(z);
    sol.dual_objective = w.b.dot(y);
    sol.primal_infeasibility = (w.b - w.apply_all(X, z)).norm() / (1.0 + nb);
    sol.dual_infeasibility =
        std::sqrt((w.C - a_y - S).squaredNorm() + (w.c - a_yl - s).squaredNorm()) / (1.0 + norm_c);
    sol.relative_gap = std::abs(sol.primal_objective - sol.dual_objective) /
                       (1.0 + std::abs(sol.primal_objective) + std::abs(sol.dual_objective));
  } else {
    const auto dropped = sol.dropped_rows;
    sol = best;
    sol.dropped_rows = dropped;
    sol.iterations = it;
  }
  sol.status = status;

  // Map multipliers back onto the original constraint list.
  Vector yfull = Vector::Zero(static_cast<Eigen::Index>(prog.constraints().size()));
  for (std::size_t k = 0; k < w.m; ++k) yfull(static_cast<Eigen::Index>(kept[k])) = sol.y(static_cast<Eigen::Index>(k));
  sol.y = std::move(yfull);
  return sol;
}

struct DualCertificate {
  Vector y;
  SymMatrix S;
  Vector s;
  double residual = 0.0;  // max-abs of C - sum y_i A_i - S and its orthant analogue
};

/// Dual (y, S, s) of a converged solve together with its residual.
inline DualCertificate extract_dual_certificate(const ConicSolution& sol, const ConicProgram& prog) {
  if (!sol.converged()) throw SolverError("dual certificate requested from a non-converged solve");
  const auto n = static_cast<Eigen::Index>(prog.psd_dim());
  Dense r = prog.objective().dense() - sol.S;
  Vector rl = prog.objective_nonneg() - sol.s;
  for (std::size_t k = 0; k < prog.constraints().size(); ++k) {
    const double yk = sol.y(static_cast<Eigen::Index>(k));
    for (const auto& e : prog.constraints()[k].psd) {
      r(e.i, e.j) -= yk * e.v;
      if (e.i != e.j) r(e.j, e.i) -= yk * e.v;
    }
    for (const auto& [idx, a] : prog.constraints()[k].nonneg) rl(static_cast<Eigen::Index>(idx)) -= yk * a;
  }
  (void)n;
  DualCertificate cert{sol.y, SymMatrix::symmetrized(sol.S), sol.s, 0.0};
  cert.residual = std::max(r.cwiseAbs().maxCoeff(), rl.size() ? rl.cwiseAbs().maxCoeff() : 0.0);
  if (cert.residual > 1e-7) throw SolverError("dual certificate residual above 1e-7");
  return cert;
}

}  // namespace stqp
