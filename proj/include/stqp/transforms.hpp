#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "stqp/errors.hpp"
#include "stqp/simplex.hpp"
#include "stqp/sym_matrix.hpp"

namespace stqp {

/// A bijection on {0..n-1}; perm[i] is the image of i.
using Permutation = std::vector<std::size_t>;

inline void check_permutation(const Permutation& p, std::size_t n) {
  if (p.size() != n) throw InvalidArgument("permutation: length does not match dimension");
  std::vector<bool> seen(n, false);
  for (auto v : p) {
    if (v >= n || seen[v]) throw InvalidArgument("permutation: not a bijection");
    seen[v] = true;
  }
}

inline Permutation inverse(const Permutation& p) {
  check_permutation(p, p.size());
  Permutation inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
  return inv;
}

/// Q + lambda E.
inline SymMatrix shift(const SymMatrix& q, double lambda) {
  return SymMatrix::generate(q.n(), [&](std::size_t i, std::size_t j) { return q(i, j) + lambda; });
}

/// D Q D with D = diag(d), all d_j > 0.
inline SymMatrix diag_scale(const SymMatrix& q, const Vector& d) {
  if (static_cast<std::size_t>(d.size()) != q.n())
    throw DimensionError("diag_scale: scaling vector length mismatch");
  for (Eigen::Index j = 0; j < d.size(); ++j)
    if (!(d(j) > 0.0)) throw InvalidArgument("diag_scale: scaling entries must be positive");
  return SymMatrix::generate(q.n(), [&](std::size_t i, std::size_t j) {
    return d(static_cast<Eigen::Index>(i)) * q(i, j) * d(static_cast<Eigen::Index>(j));
  });
}

/// J^T Q J for the permutation matrix J with J e_i = e_{perm[i]}; entry
/// (i,j) of the result is Q(perm[i], perm[j]).
inline SymMatrix permute(const SymMatrix& q, const Permutation& perm) {
  check_permutation(perm, q.n());
  return SymMatrix::generate(q.n(), [&](std::size_t i, std::size_t j) { return q(perm[i], perm[j]); });
}

/// The point J^T x, i.e. the image of a minimizer of Q as a minimizer of J^T Q J.
inline SimplexPoint permute(const SimplexPoint& x, const Permutation& perm) {
  check_permutation(perm, x.n());
  Vector y(x.x().size());
  for (std::size_t i = 0; i < perm.size(); ++i) y(static_cast<Eigen::Index>(i)) = x[perm[i]];
  return SimplexPoint(std::move(y), x.tol_zero());
}

inline SymMatrix principal_submatrix(const SymMatrix& q, const IndexSet& idx) {
  if (idx.empty()) throw InvalidArgument("principal_submatrix: empty index set");
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= q.n()) throw DimensionError("principal_submatrix: index out of range");
    if (k > 0 && idx[k] <= idx[k - 1])
      throw InvalidArgument("principal_submatrix: index set must be strictly increasing");
  }
  return SymMatrix::generate(idx.size(), [&](std::size_t i, std::size_t j) { return q(idx[i], idx[j]); });
}

/// Embeds a vector on `idx` into R^n with zeros elsewhere.
inline Vector embed(const Vector& xa, const IndexSet& idx, std::size_t n) {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < idx.size(); ++k)
    x(static_cast<Eigen::Index>(idx[k])) = xa(static_cast<Eigen::Index>(k));
  return x;
}

}  // namespace stqp
