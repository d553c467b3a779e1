#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stqp/affine_slice.hpp"
#include "stqp/errors.hpp"
#include "stqp/simplex.hpp"
#include "stqp/sym_matrix.hpp"
#include "stqp/transforms.hpp"

namespace stqp {

// Exact global minimization of x^T Q x over the unit simplex by enumerating
// supports. On a support A every relative-interior KKT point solves
//   Q_AA x_A = mu e,  e^T x_A = 1,
// and mu = x^T Q x is constant on that solution set. The global minimum is
// attained in the relative interior of some face, so the smallest value
// over all feasible supports is nu(Q).

inline constexpr std::size_t kDefaultExactCap = 14;
inline constexpr std::size_t kMaxExactCap = 22;

struct SolveOptions {
  std::size_t cap_n = kDefaultExactCap;
  double tol_zero = kDefaultTolZero;
  /// Absolute window (scaled by max(1,|nu|)) for counting a support as optimal.
  double opt_tol = 1e-9;
  /// Re-checks copositivity of Q - nu E after solving.
  bool verify = false;
};

struct SolveResult {
  double nu = 0.0;
  std::vector<SimplexPoint> minimizers;
  std::vector<Vector> multipliers;  // s = Qx - (x^T Q x) e, one per minimizer
};

/// A relative-interior KKT point found on one support.
struct SupportCandidate {
  std::uint64_t support = 0;
  Vector x;
  double value = 0.0;
};

namespace detail {

inline void check_cap(std::size_t n, std::size_t cap) {
  if (cap > kMaxExactCap) throw CapExceeded("exact solver: cap above supported maximum");
  if (n > cap)
    throw CapExceeded("exact solver: dimension " + std::to_string(n) + " exceeds cap " +
                      std::to_string(cap));
}

/// Point of the support-A KKT system with all x_A > tol_zero, if any.
inline std::optional<SupportCandidate> support_candidate(const Dense& q, std::uint64_t mask,
                                                         double tol_zero) {
  const IndexSet a = from_mask(mask);
  const auto m = static_cast<Eigen::Index>(a.size());
  const auto n = q.rows();
  Dense k = Dense::Zero(m + 1, m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j)
      k(i, j) = q(static_cast<Eigen::Index>(a[i]), static_cast<Eigen::Index>(a[j]));
    k(i, m) = 1.0;
    k(m, i) = 1.0;
  }
  Vector rhs = Vector::Zero(m + 1);
  rhs(m) = 1.0;
  const double scale = std::max(1.0, k.lpNorm<Eigen::Infinity>());
  AffineSet sol = solve_affine(k, rhs, 1e-11, 1e-9 * scale);
  if (!sol.consistent) return std::nullopt;

  Vector xa;
  if (sol.null_basis.cols() == 0) {
    xa = sol.particular.head(m);
    if (xa.minCoeff() <= tol_zero) return std::nullopt;
  } else {
    // Restrict to the x-block; the multiplier block is constant on the set.
    Dense nx = sol.null_basis.topRows(m);
    Eigen::HouseholderQR<Dense> qr(nx);
    Eigen::Index r = 0;
    const Dense rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index c = 0; c < std::min(rmat.rows(), rmat.cols()); ++c)
      if (std::abs(rmat(c, c)) > 1e-10) ++r;
    Dense basis = qr.householderQ() * Dense::Identity(m, nx.cols());
    basis = basis.leftCols(std::min<Eigen::Index>(r, nx.cols())).eval();
    auto best = max_min_point(sol.particular.head(m), basis);
    if (!best || best->min_coord <= tol_zero) return std::nullopt;
    xa = best->x;
  }
  xa /= xa.sum();
  Vector x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) x(static_cast<Eigen::Index>(a[i])) = xa(i);
  return SupportCandidate{mask, x, x.dot(q * x)};
}

}  // namespace detail

/// Every support that carries a relative-interior KKT point, ordered by
/// (value, support bitmask).
inline std::vector<SupportCandidate> enumerate_supports(const SymMatrix& q,
                                                        const SolveOptions& opt = {}) {
  detail::check_cap(q.n(), opt.cap_n);
  const Dense qd = q.dense();
  const std::uint64_t full = (std::uint64_t{1} << q.n()) - 1;
  std::vector<SupportCandidate> out;
  for (std::uint64_t mask = 1; mask <= full; ++mask)
    if (auto c = detail::support_candidate(qd, mask, opt.tol_zero)) out.push_back(std::move(*c));
  std::sort(out.begin(), out.end(), [](const SupportCandidate& a, const SupportCandidate& b) {
    if (a.value != b.value) return a.value < b.value;
    return from_mask(a.support) < from_mask(b.support);
  });
  return out;
}

inline double optimal_window(double nu, double opt_tol) { return opt_tol * std::max(1.0, std::abs(nu)); }

inline SolveResult solve_stqp(const SymMatrix& q, const SolveOptions& opt = {});

/// All representatives whose value is within `tol` of nu(Q), one per support.
inline std::vector<SimplexPoint> optimal_set(const SymMatrix& q, double tol = 1e-9,
                                             const SolveOptions& opt = {}) {
  auto cands = enumerate_supports(q, opt);
  if (cands.empty()) throw SolverError("exact solver: no candidate found");
  const double nu = cands.front().value;
  std::vector<SimplexPoint> pts;
  for (const auto& c : cands)
    if (c.value <= nu + tol * std::max(1.0, std::abs(nu)))
      pts.push_back(SimplexPoint::project(c.x, opt.tol_zero));
  return pts;
}

inline bool is_copositive(const SymMatrix& m, double tol = 1e-9, const SolveOptions& opt = {});

inline SolveResult solve_stqp(const SymMatrix& q, const SolveOptions& opt) {
  auto cands = enumerate_supports(q, opt);
  if (cands.empty()) throw SolverError("exact solver: no candidate found");
  SolveResult res;
  res.nu = cands.front().value;
  const double window = optimal_window(res.nu, opt.opt_tol);
  const Dense qd = q.dense();
  for (const auto& c : cands) {
    if (c.value > res.nu + window) break;
    auto pt = SimplexPoint::project(c.x, opt.tol_zero);
    const double v = pt.x().dot(qd * pt.x());
    res.multipliers.push_back(qd * pt.x() - v * Vector::Ones(qd.rows()));
    res.minimizers.push_back(std::move(pt));
  }
  if (opt.verify) {
    SolveOptions inner = opt;
    inner.verify = false;
    if (!is_copositive(shift(q, -res.nu), 1e-9, inner))
      throw SolverError("exact solver: global optimality check failed");
  }
  return res;
}

/// M is copositive iff nu(M) >= 0.
inline bool is_copositive(const SymMatrix& m, double tol, const SolveOptions& opt) {
  return solve_stqp(m, opt).nu >= -tol;
}

/// The zero set V^M of a copositive M, one representative per support.
inline std::vector<SimplexPoint> copositive_zeros(const SymMatrix& m, double tol = 1e-9,
                                                  const SolveOptions& opt = {}) {
  auto cands = enumerate_supports(m, opt);
  const double nu = cands.front().value;
  if (nu < -tol) throw InvalidArgument("copositive_zeros: matrix is not copositive");
  std::vector<SimplexPoint> out;
  for (const auto& c : cands)
    if (std::abs(c.value) <= tol) out.push_back(SimplexPoint::project(c.x, opt.tol_zero));
  return out;
}

struct KktCertificate {
  SimplexPoint x;
  Vector s;
  double value = 0.0;
};

/// First-order certificate: s = Qx - (x^T Q x) e must be nonnegative and
/// complementary to x.
inline std::optional<KktCertificate> check_kkt(const SymMatrix& q, const SimplexPoint& x,
                                               double tol = 1e-8) {
  if (q.n() != x.n()) throw DimensionError("check_kkt: dimension mismatch");
  const Dense qd = q.dense();
  const Vector qx = qd * x.x();
  const double v = x.x().dot(qx);
  Vector s = qx - v * Vector::Ones(qx.size());
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    if (s(j) < -tol) return std::nullopt;
    if (std::abs(x.x()(j) * s(j)) > tol) return std::nullopt;
  }
  return KktCertificate{x, std::move(s), v};
}

enum class SecondOrder { holds, fails, indeterminate };

inline const char* to_string(SecondOrder s) {
  switch (s) {
    case SecondOrder::holds: return "holds";
    case SecondOrder::fails: return "fails";
    default: return "indeterminate";
  }
}

/// Cone of feasible directions orthogonal to the gradient at a KKT point:
/// D(x) = {d : e^T d = 0, d^T Q x = 0, d_j >= 0 for j in Z(x)}.
/// At a KKT point d^T Q x = s^T d, so coordinates with s_j > 0 are pinned
/// to zero and the rest of Z(x) stays sign-constrained.
struct FeasibleDirectionCone {
  IndexSet free_coords;    // A(x)
  IndexSet signed_coords;  // j in Z(x) with s_j = 0
  IndexSet pinned_coords;  // j in Z(x) with s_j > 0
  /// d = basis * [v; u] with v free and u >= 0 parametrizes D(x).
  Dense basis;
  Eigen::Index free_params = 0;

  bool contains(const Vector& d, double tol = 1e-9) const {
    if (std::abs(d.sum()) > tol) return false;
    for (auto j : pinned_coords)
      if (std::abs(d(static_cast<Eigen::Index>(j))) > tol) return false;
    for (auto j : signed_coords)
      if (d(static_cast<Eigen::Index>(j)) < -tol) return false;
    return true;
  }
};

inline FeasibleDirectionCone feasible_direction_cone(const KktCertificate& cert, double tol = 1e-8) {
  FeasibleDirectionCone cone;
  const auto n = static_cast<Eigen::Index>(cert.x.n());
  cone.free_coords = cert.x.support();
  for (auto j : cert.x.zero_set()) {
    if (cert.s(static_cast<Eigen::Index>(j)) > tol)
      cone.pinned_coords.push_back(j);
    else
      cone.signed_coords.push_back(j);
  }
  const auto na = static_cast<Eigen::Index>(cone.free_coords.size());
  const auto nu = static_cast<Eigen::Index>(cone.signed_coords.size());
  cone.free_params = na - 1;
  cone.basis = Dense::Zero(n, (na - 1) + nu);
  // Orthonormal basis of e^perp within the support block.
  Dense ones = Dense::Ones(na, 1);
  Eigen::HouseholderQR<Dense> qr(ones);
  Dense full_q = qr.householderQ() * Dense::Identity(na, na);
  for (Eigen::Index c = 0; c + 1 < na; ++c)
    for (Eigen::Index r = 0; r < na; ++r)
      cone.basis(static_cast<Eigen::Index>(cone.free_coords[r]), c) = full_q(r, c + 1);
  // Each signed coordinate moves mass off the support uniformly.
  for (Eigen::Index c = 0; c < nu; ++c) {
    cone.basis(static_cast<Eigen::Index>(cone.signed_coords[c]), na - 1 + c) = 1.0;
    for (Eigen::Index r = 0; r < na; ++r)
      cone.basis(static_cast<Eigen::Index>(cone.free_coords[r]), na - 1 + c) = -1.0 / double(na);
  }
  return cone;
}

/// Second-order condition d^T Q d >= 0 on D(x). The free block must be PSD;
/// coupling into its null space makes the form unbounded below; otherwise
/// the Schur complement onto the sign-constrained block is tested for
/// copositivity with the exact solver (strictly smaller dimension).
inline SecondOrder check_second_order(const SymMatrix& q, const KktCertificate& cert,
                                      double tol = 1e-8, const SolveOptions& opt = {}) {
  const auto cone = feasible_direction_cone(cert, tol);
  const Dense h = cone.basis.transpose() * q.dense() * cone.basis;
  const Eigen::Index nv = cone.free_params;
  const Eigen::Index nu = h.rows() - nv;
  const double scale = std::max(1.0, q.max_abs());
  if (h.rows() == 0) return SecondOrder::holds;

  Dense reduced;
  if (nv == 0) {
    reduced = h;
  } else {
    Eigen::SelfAdjointEigenSolver<Dense> es(h.topLeftCorner(nv, nv));
    const Vector& lam = es.eigenvalues();
    const Dense& vec = es.eigenvectors();
    if (lam(0) < -tol * scale) return SecondOrder::fails;
    if (nu == 0) return SecondOrder::holds;
    const Dense hvu = h.topRightCorner(nv, nu);
    Dense pinv = Dense::Zero(nv, nv);
    double coupling = 0.0;
    for (Eigen::Index k = 0; k < nv; ++k) {
      const Vector vk = vec.col(k);
      if (lam(k) <= tol * scale) {
        coupling = std::max(coupling, (vk.transpose() * hvu).cwiseAbs().maxCoeff());
      } else {
        pinv += vk * vk.transpose() / lam(k);
      }
    }
    if (coupling > std::sqrt(tol) * scale) return SecondOrder::fails;
    if (coupling > tol * scale) return SecondOrder::indeterminate;
    reduced = h.bottomRightCorner(nu, nu) - hvu.transpose() * pinv * hvu;
  }
  const auto r = SymMatrix::symmetrized(reduced);
  return is_copositive(r, tol * scale, opt) ? SecondOrder::holds : SecondOrder::fails;
}

}  // namespace stqp
